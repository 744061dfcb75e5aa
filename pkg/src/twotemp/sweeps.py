"""Running cases and parameter sweeps.

Independent runs fan out to a process pool whose size comes from the
``TWOTEMP_WORKERS`` environment variable (default 1, i.e. in-process).
Results are always ordered by parameter value.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analytic import AnalyticProfile
from .cases import CaseSpec, d_sweep_values, traveling_wave_case
from .diagnostics import ErrorReport, error_split, plateau_deviation, slope_fit
from .fv import Grid1D, RunResult, SchemeConfig, run, timesteps
from .io import csv_text, trajectory_csv

WORKERS_ENV = "TWOTEMP_WORKERS"

# named variants of the nonconservative treatment used by the sweeps
VARIANTS = {
    "standard": dict(scheme="A"),
    "compat": dict(scheme="B", corrections=False),
    "corrected": dict(scheme="B", corrections=True),
}


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def pool_map(fn, items):
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


@dataclass
class CaseRun:
    case: CaseSpec
    config: SchemeConfig
    grid: Grid1D
    profile: AnalyticProfile
    result: RunResult
    report: ErrorReport
    plateau: float
    te_error_amplitude: float
    metadata: dict = field(default_factory=dict)

    def csv(self, index: int = -1) -> str:
        snap = self.result.snapshots[index]
        return trajectory_csv(snap, self.profile, self.grid.centers)


def run_case(case: CaseSpec, config: SchemeConfig, t_final: float | None = None,
             output_times=None) -> CaseRun:
    grid = Grid1D(case.n_cells, case.length)
    states = case.states()
    profile = AnalyticProfile.build(states, case.params, case.x0)
    t_f = case.t_final if t_final is None else t_final
    times = case.output_times if output_times is None else output_times
    result = run(config, grid, case.params, profile, t_f, output_times=times)
    report = error_split(result.field, profile, grid)
    plateau = plateau_deviation(result.field, profile, grid)
    dt_conv, dt_fourier = timesteps(config, grid, states, case.params)
    meta = {
        "case": case.name, "scheme": config.scheme, "flux": config.flux, "courant": config.courant,
        "corrections": config.corrections, "n_cells": case.n_cells, "length": case.length,
        "D": case.params.D, "lam": case.params.lam, "t_final": t_f,
        "dt": result.dt, "dt_conv": dt_conv, "dt_fourier": dt_fourier, "dt_diffusion": result.dt_diffusion,
        "conv_sweeps": result.conv_sweeps, "diff_sweeps": result.diff_sweeps,
        "wall_time": result.wall_time, "nodes_per_ld": case.nodes_per_ld,
        "shock_position": profile.shock_position(t_f), "plateau_deviation": plateau,
        **report.as_dict(),
    }
    return CaseRun(case=case, config=config, grid=grid, profile=profile, result=result, report=report,
                   plateau=plateau, te_error_amplitude=report.te_linf, metadata=meta)


# --------------------------------------------------------------------------
# D sweep

D_SWEEP_COLUMNS = ("variant", "N", "D", "nodes_per_LD", "l2_downstream", "l2_upstream", "l2_full",
                   "linf", "plateau")


def _d_point(args):
    variant, D, n_cells = args
    case = traveling_wave_case(f"dsweep-{D:.4g}", D, n_cells=n_cells)
    cr = run_case(case, SchemeConfig(**VARIANTS[variant]))
    rep = cr.report
    return {"variant": variant, "N": n_cells, "D": D, "nodes_per_LD": case.nodes_per_ld,
            "l2_downstream": rep.l2_downstream, "l2_upstream": rep.l2_upstream, "l2_full": rep.l2_full,
            "linf": rep.linf, "plateau": cr.plateau}


def d_sweep(variants=("standard",), points: int = 9, d_min: float = 1e-3, d_max: float = 1e-1,
            n_cells: int = 2000) -> list[dict]:
    for v in variants:
        if v not in VARIANTS:
            raise ValueError(f"unknown variant {v!r}; expected one of {sorted(VARIANTS)}")
    jobs = [(v, float(D), n_cells) for v in variants for D in d_sweep_values(points, d_min, d_max)]
    return pool_map(_d_point, jobs)


def sweep_slopes(rows: list[dict], variant: str = "standard") -> dict:
    """Two-regime log-log slopes of the downstream and upstream errors against nodes per L_D."""
    sel = [r for r in rows if r["variant"] == variant]
    out = {}
    for key in ("l2_downstream", "l2_upstream"):
        fit = slope_fit([(r["nodes_per_LD"], r[key]) for r in sel])
        out[key] = {"slopes": [-s for s in fit.slopes], "breakpoint": fit.breakpoint}
    return out


def d_sweep_csv(rows: list[dict]) -> str:
    return csv_text(D_SWEEP_COLUMNS, rows)


# --------------------------------------------------------------------------
# Courant sweep for the split scheme

COURANT_COLUMNS = ("courant", "dt", "conv_sweeps", "diff_sweeps", "te_error_amplitude", "l2_full", "linf")


def _courant_point(args):
    case, courant = args
    cr = run_case(case, SchemeConfig(scheme="C", courant=courant))
    return {"courant": courant, "dt": cr.result.dt, "conv_sweeps": cr.result.conv_sweeps,
            "diff_sweeps": cr.result.diff_sweeps, "te_error_amplitude": cr.te_error_amplitude,
            "l2_full": cr.report.l2_full, "linf": cr.report.linf}


def courant_sweep(case: CaseSpec, courants=(0.05, 0.2, 0.3, 0.4)) -> list[dict]:
    return pool_map(_courant_point, [(case, float(c)) for c in sorted(courants)])


def monotone(values, increasing: bool) -> bool:
    v = np.asarray(values, dtype=float)
    d = np.diff(v)
    return bool(np.all(d > 0) if increasing else np.all(d < 0))
