"""Acceptance checks shared by the ``verify`` command and the test-suite.

Each check returns a ``CheckResult`` made of named sub-checks. Results of
expensive runs (the diffusion sweep, the solar runs) are memoised per
process so that several checks can reuse them.
"""
from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .analytic import AnalyticProfile, compatibility_residual, wave_coefficients
from .cases import get_case, solar_case, traveling_wave_case
from .core import DomainError, ElectronState
from .coupled import frozen_velocity_eigenvalues, mach_sweep, shoot_jump
from .diagnostics import gradient_centered, shock_cell
from .fv import FieldState, Grid1D, SchemeConfig, convective_flux, diffusive_flux, step, timesteps
from .jumps import decoupled_mach_limit, jump_decoupled, jump_entropy, jump_source
from .sweeps import d_sweep, run_case, sweep_slopes


# sub-checks this implementation is known not to meet; reported, never hidden
KNOWN_LIMITATIONS = {
    7: {"upstream_low", "upstream_high"},
    8: {"C_as_accurate_as_B", "courant_0.4_artefact"},
}


@dataclass
class CheckResult:
    number: int
    title: str
    checks: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    @property
    def failed_checks(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    @property
    def unexpected_failures(self) -> list[str]:
        known = KNOWN_LIMITATIONS.get(self.number, set())
        return [k for k in self.failed_checks if k not in known]

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = ""
        if not self.passed:
            note = "" if self.unexpected_failures else "; known limitation"
            extra = f" (failing: {', '.join(self.failed_checks)}{note})"
        return f"[{status}] {self.number:2d}. {self.title}{extra} [{self.seconds:.1f}s]"

    def as_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "unexpected_failures": self.unexpected_failures,
                "checks": dict(self.checks), "values": dict(self.values), "seconds": self.seconds}


def _rel(a, b):
    return abs(a / b - 1.0)


# --------------------------------------------------------------------------
# memoised runs


@functools.lru_cache(maxsize=None)
def _case_run(name: str, scheme: str, corrections: bool = True, courant: float = 0.2,
              flux: str = "godunov-upwind"):
    cfg = SchemeConfig(scheme=scheme, corrections=corrections, courant=courant, flux=flux)
    return run_case(get_case(name), cfg)


@functools.lru_cache(maxsize=None)
def _d_sweep_rows(points: int = 9):
    return tuple(d_sweep(("standard", "compat", "corrected"), points=points))


# --------------------------------------------------------------------------
# checks


def check_jump_formulas() -> CheckResult:
    r = CheckResult(1, "jump formulas at M = 1.1832 match the reference left state")
    j = jump_decoupled(1.1832, 5.0 / 3.0)
    r.values = j.as_dict()
    r.checks["pe_ratio"] = _rel(j.pe_ratio, 1.5556) < 1e-3
    r.checks["te_ratio"] = _rel(j.te_ratio, 1.2222) < 1e-3
    r.checks["rhoe_ratio"] = _rel(j.rhoe_ratio, 1.2727) < 1e-3
    st = traveling_wave_case("caseHD", 0.1).states()
    ref = {"pe": (st.left_electron.pe, 0.1556), "rho_e": (st.left_electron.rho_e, 0.01274),
             "rho_h": (st.left_heavy.rho_h, 1.274)}
    for key, (got, want) in ref.items():
        r.values[f"left_{key}"] = got
        # the reference densities are rounded 1.02e-3 away from the exact ratio
        r.checks[f"reference_{key}"] = _rel(got, want) < 1.5e-3
    return r


def check_validity_singularity() -> CheckResult:
    r = CheckResult(2, "decoupled jump is singular from M = sqrt(5) on; model ordering below it")
    g = 5.0 / 3.0
    lim = decoupled_mach_limit(g)
    r.values["limit"] = lim
    r.checks["limit_is_sqrt5"] = abs(lim - math.sqrt(5.0)) < 1e-14

    def raises(m):
        try:
            jump_decoupled(m, g)
        except DomainError:
            return True
        return False

    r.checks["raises_at_limit"] = raises(math.sqrt(5.0) + 1e-15) and raises(lim) and raises(3.0)
    r.checks["finite_below_limit"] = np.isfinite(jump_decoupled(lim * (1 - 1e-9), g).te_ratio)
    machs = np.linspace(1.0, 1.5, 22)[1:-1]
    order = [jump_decoupled(m, g).te_ratio > jump_entropy(m, g).te_ratio > jump_source(m, g).te_ratio
             for m in machs]
    r.checks["te_ordering_20_points"] = len(order) == 20 and all(order)
    return r


def check_analytic_profile() -> CheckResult:
    r = CheckResult(3, "analytic profile satisfies the compatibility conditions")
    case = traveling_wave_case("caseHD", 0.1)
    prof = AnalyticProfile.build(case.states(), case.params, case.x0)
    res, dte = compatibility_residual(prof)
    st = prof.states
    dpe, _ = prof.right_derivatives()
    pe0 = float(prof.sample_xi(np.array([0.0]))[0][0])
    scale = abs(pe0 * st.velocity_jump)
    r.values.update(residual=res, te_slope=dte, pe_jump_flux=case.params.D * dpe, pe0_du=pe0 * st.velocity_jump)
    r.checks["residual"] = abs(res) < 1e-10
    r.checks["te_slope_zero"] = abs(dte) < 1e-12 * max(1.0, abs(st.left_electron.Te * prof.coeffs.delta_plus))
    r.checks["pe_flux_jump"] = abs(case.params.D * dpe - pe0 * st.velocity_jump) < 1e-13 * max(scale, 1.0)
    return r


def check_over_resolved() -> CheckResult:
    r = CheckResult(4, "case HD with the standard scheme captures the wave")
    cr = _case_run("caseHD", "A")
    L = cr.case.length
    pos = cr.profile.shock_position(cr.case.t_final) / L
    r.values.update(position=pos, linf=cr.report.linf, plateau=cr.plateau)
    r.checks["position_0.373L"] = abs(pos - 0.373) < 5e-4
    r.checks["linf_below_3pct"] = cr.report.linf < 0.03
    r.checks["no_plateau_offset"] = abs(cr.plateau) < 1e-3
    return r


def _gradient_spike(cr, half_width: int = 10) -> float:
    """Max gradient error of e_e near the shock, relative to the largest exact gradient there."""
    g = cr.case.params.gamma
    f = cr.result.field
    ee_num = f.temperature(g) / (g - 1.0)
    _, te_ex = cr.profile.sample(cr.grid.centers, f.time)
    ee_ex = te_ex / (g - 1.0)
    js = shock_cell(cr.grid, cr.profile.shock_position(f.time))
    w = slice(max(js - half_width, 0), js + half_width + 1)
    gn = gradient_centered(ee_num, cr.grid.dx)[w]
    ge = gradient_centered(ee_ex, cr.grid.dx)[w]
    return float(np.max(np.abs(gn - ge)) / np.max(np.abs(ge)))


def check_under_resolved_failure() -> CheckResult:
    r = CheckResult(5, "case WD with the standard scheme shows the artificial shock")
    wd = _case_run("caseWD", "A")
    hd = _case_run("caseHD", "A")
    spike_wd, spike_hd = _gradient_spike(wd), _gradient_spike(hd)
    r.values.update(plateau=wd.plateau, spike_wd=spike_wd, spike_hd=spike_hd)
    r.checks["plateau_deviates"] = abs(wd.plateau) > 5e-3
    r.checks["gradient_spike"] = spike_wd >= 0.1 and spike_wd >= 2.5 * spike_hd
    return r


def _increasing_trend(x, y) -> bool:
    """Error grows overall and monotonically once the diffusion length spans two cells."""
    x, y = np.asarray(x), np.asarray(y)
    upper = y[x >= 2.0]
    return bool(y[-1] > 2.0 * y[0] and np.all(np.diff(upper) > 0))


def check_compat_fix() -> CheckResult:
    r = CheckResult(6, "compatibility-based scheme fixes the weakly resolved case")
    a = _case_run("caseWD", "A")
    b = _case_run("caseWD", "B")
    r.values.update(plateau_A=a.plateau, plateau_B=b.plateau)
    r.checks["plateau_5x_better"] = abs(b.plateau) * 5.0 <= abs(a.plateau)
    rows = _d_sweep_rows()
    comp = sorted((x for x in rows if x["variant"] == "compat"), key=lambda x: x["nodes_per_LD"])
    corr = sorted((x for x in rows if x["variant"] == "corrected"), key=lambda x: x["nodes_per_LD"])
    r.values["compat_l2"] = [x["l2_full"] for x in comp]
    r.values["corrected_l2"] = [x["l2_full"] for x in corr]
    r.checks["uncorrected_increases"] = _increasing_trend([x["nodes_per_LD"] for x in comp],
                                                          [x["l2_full"] for x in comp])
    r.checks["corrected_decreases"] = bool(np.all(np.diff([x["l2_full"] for x in corr]) < 0))
    return r


def check_convergence_slopes() -> CheckResult:
    r = CheckResult(7, "downstream/upstream convergence slopes against nodes per L_D")
    slopes = sweep_slopes(list(_d_sweep_rows()), "standard")
    down = slopes["l2_downstream"]["slopes"]
    up = slopes["l2_upstream"]["slopes"]
    r.values.update(downstream=down, upstream=up, breakpoints=[slopes["l2_downstream"]["breakpoint"],
                                                                slopes["l2_upstream"]["breakpoint"]])
    r.checks["downstream_low"] = abs(down[0] - 0.3324) <= 0.15
    r.checks["downstream_high"] = abs(down[1] - 1.314) <= 0.15
    r.checks["upstream_low"] = abs(up[0] - 0.2541) <= 0.1
    r.checks["upstream_high"] = abs(up[1] - 0.3846) <= 0.1
    return r


def check_solar() -> CheckResult:
    r = CheckResult(8, "solar case: timesteps, scheme ranking and splitting")
    for n, ref in ((1000, 0.4095), (5000, 0.0164)):
        case = solar_case(n)
        _, dtf = timesteps(SchemeConfig(), Grid1D(n, case.length), case.states(), case.params)
        r.values[f"dt_fourier_{n}"] = dtf
        # reference values carry 3-4 digits
        r.checks[f"dt_fourier_{n}"] = _rel(dtf, ref) < 2e-3
    runs = {}
    for name in ("solar", "solar5000"):
        for key, kw in (("A", dict(scheme="A")), ("B", dict(scheme="B")),
                        ("C", dict(scheme="C")), ("C04", dict(scheme="C", courant=0.4))):
            if name == "solar" and key == "C04":
                continue
            runs[(name, key)] = _case_run(name, **kw)
    r.checks["runs_complete"] = all(np.all(np.isfinite(cr.result.field.u2)) for cr in runs.values())
    amp = {k: cr.te_error_amplitude for k, cr in runs.items()}
    r.values.update({f"te_err_{n}_{k}": v for (n, k), v in amp.items()})
    ratio = amp[("solar5000", "A")] / amp[("solar5000", "B")]
    r.values["B_over_A_gain"] = ratio
    r.checks["B_reduces_te_error_5x"] = ratio >= 5.0
    r.checks["C_as_accurate_as_B"] = amp[("solar5000", "C")] <= amp[("solar5000", "B")]
    sweeps_b = runs[("solar5000", "B")].result.conv_sweeps
    sweeps_c = runs[("solar5000", "C")].result.conv_sweeps
    r.values["conv_sweep_ratio"] = sweeps_b / sweeps_c
    r.checks["C_20x_fewer_conv_sweeps"] = sweeps_b >= 20 * sweeps_c
    art = amp[("solar5000", "C04")] / amp[("solar5000", "C")]
    r.values["courant_0.4_over_0.2"] = art
    r.checks["courant_0.4_artefact"] = art >= 2.0
    return r


def check_coupled() -> CheckResult:
    r = CheckResult(9, "coupled travelling wave: invariants, frozen limit and shooting")
    case = traveling_wave_case("caseHD", 0.1)
    st = case.states()
    p = case.params
    eig = frozen_velocity_eigenvalues(st.right_heavy, st.right_electron, st.sigma, p)
    co = wave_coefficients(p, st.right_electron, st.c_r, st.mach_r)
    exact = np.sort([co.delta_plus, co.delta_minus])
    err = float(np.max(np.abs(eig / exact - 1.0)))
    r.values["frozen_eig_rel_err"] = err
    r.checks["frozen_eigenvalues"] = err < 1e-8
    drift = 0.0
    for mach in (1.05, 1.1832):
        res = shoot_jump(st.right_heavy, st.right_electron, mach, p)
        dec = jump_decoupled(mach, p.gamma)
        tr = res.trajectory
        drift = max(drift, tr.entropy_drift(), tr.integral_drift(p))
        r.values[f"M{mach}"] = {"pe": res.pe_ratio, "te": res.te_ratio, "dec_pe": dec.pe_ratio,
                                "dec_te": dec.te_ratio}
        r.checks[f"agrees_decoupled_M{mach}"] = (_rel(res.pe_ratio, dec.pe_ratio) < 0.05
                                                 and _rel(res.te_ratio, dec.te_ratio) < 0.05)
    rows = mach_sweep([2.2, math.sqrt(5.0), 2.3], st.right_heavy, st.right_electron, p)
    for row in rows:
        drift_row = row["residual"]
        r.values[f"sweep_M{row['mach']:.4f}"] = (row["coupled_pe"], row["coupled_te"], drift_row)
    r.checks["finite_through_sqrt5"] = all(np.isfinite(row["coupled_pe"]) and np.isfinite(row["coupled_te"])
                                           for row in rows)
    r.values["invariant_drift"] = drift
    r.checks["invariant_drift"] = drift < 1e-8
    return r


def mass_budget_residual(case_name: str = "caseWD", scheme: str = "B", t: float = 0.3) -> float:
    """|change of total electron mass + boundary flux budget| over one step, relative."""
    case = get_case(case_name)
    grid = Grid1D(case.n_cells, case.length)
    st = case.states()
    prof = AnalyticProfile.build(st, case.params, case.x0)
    u1, u2 = prof.conserved(grid.centers, t)
    f0 = FieldState(u1, u2, t)
    cfg = SchemeConfig(scheme=scheme)
    dt = min(timesteps(cfg, grid, st, case.params)[0], 1e-4)
    f1 = step(cfg, grid, case.params, prof, f0, dt)
    gl = prof.conserved(np.array([-0.5 * grid.dx]), t)
    gr = prof.conserved(np.array([case.length + 0.5 * grid.dx]), t)
    left = (float(gl[0][0]), float(gl[1][0]))
    right = (float(gr[0][0]), float(gr[1][0]))
    inner_l = (float(u1[0]), float(u2[0]))
    inner_r = (float(u1[-1]), float(u2[-1]))
    fl = convective_flux(cfg.flux, left, inner_l, st.left_heavy.u)[0] - \
        diffusive_flux(case.params, grid, *left, *inner_l)[0]
    fr = convective_flux(cfg.flux, inner_r, right, st.right_heavy.u)[0] - \
        diffusive_flux(case.params, grid, *inner_r, *right)[0]
    change = (f1.u1.sum() - f0.u1.sum()) * grid.dx
    budget = -dt * (fr - fl)
    return abs(change - budget) / (f0.u1.sum() * grid.dx)


def check_properties() -> CheckResult:
    r = CheckResult(10, "property suite: conservation, EOS, determinism, flux robustness")
    worst = max(mass_budget_residual("caseWD", s) for s in ("A", "B"))
    worst = max(worst, mass_budget_residual("caseHD", "B"))
    r.values["mass_budget"] = worst
    r.checks["mass_conservation"] = worst < 1e-12
    rng = np.random.default_rng(7)
    rho = rng.uniform(1e-4, 1.0, 200)
    te = rng.uniform(1e-2, 1e3, 200)
    ok = True
    for a, b in zip(rho, te):
        e = ElectronState.from_temperature(a, b)
        ok &= abs(e.Te / b - 1.0) < 1e-14
        f = FieldState(np.array([a]), np.array([e.pe / (5.0 / 3.0 - 1.0)]))
        ok &= abs(f.temperature(5.0 / 3.0)[0] / b - 1.0) < 1e-14
        ok &= abs(f.pressure(5.0 / 3.0)[0] / e.pe - 1.0) < 1e-14
    r.checks["eos_round_trip"] = bool(ok)
    case = traveling_wave_case("caseWD", 1e-3, n_cells=400)
    texts = [run_case(case, SchemeConfig(scheme="B"), t_final=0.2).csv() for _ in range(2)]
    r.checks["deterministic"] = texts[0] == texts[1]
    gap = abs(_case_run("caseWD", "A").plateau - _case_run("caseWD", "B").plateau)
    diffs = {}
    for s in ("A", "B"):
        g = _case_run("caseWD", s).plateau
        lf = _case_run("caseWD", s, flux="lax-friedrichs").plateau
        diffs[s] = abs(g - lf)
    r.values.update(ab_gap=gap, flux_diff_A=diffs["A"], flux_diff_B=diffs["B"])
    r.checks["flux_robustness"] = max(diffs.values()) <= 2.0 * gap
    return r


CHECKS = {
    1: check_jump_formulas,
    2: check_validity_singularity,
    3: check_analytic_profile,
    4: check_over_resolved,
    5: check_under_resolved_failure,
    6: check_compat_fix,
    7: check_convergence_slopes,
    8: check_solar,
    9: check_coupled,
    10: check_properties,
}


def run_check(number: int) -> CheckResult:
    tic = time.perf_counter()
    res = CHECKS[number]()
    res.seconds = time.perf_counter() - tic
    return res


def run_acceptance(numbers=None) -> list[CheckResult]:
    return [run_check(n) for n in (numbers or sorted(CHECKS))]
