"""HTTP front end of the solver; the CLI talks to it in-process or over the network."""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from ..acceptance import run_check, CHECKS
from ..analytic import AnalyticProfile
from ..cases import CaseError, builtin_cases, case_from_dict, get_case
from ..core import DomainError
from ..coupled import SWEEP_COLUMNS, mach_sweep
from ..fv import BoundaryInteractionError, PositivityError, SchemeConfig
from ..io import csv_text, fmt, jsonable
from ..jumps import jump_decoupled, jump_entropy, jump_source
from ..sweeps import COURANT_COLUMNS, courant_sweep, d_sweep, d_sweep_csv, run_case, sweep_slopes
from . import schemas

app = FastAPI(title="twotemp", version="0.1.0")


def _case(name: str, config: dict | None = None, n_cells: int | None = None):
    try:
        case = case_from_dict(config) if config is not None else get_case(name)
    except CaseError as exc:
        raise HTTPException(status_code=404 if config is None else 422, detail=str(exc))
    if n_cells is not None:
        case = case.with_grid(n_cells)
    return case


@app.get("/health")
def health():
    return {"status": "ok"}


@app.get("/cases", response_model=list[schemas.CaseOut])
def cases():
    return [schemas.CaseOut(name=c.name, config=jsonable(c.to_dict()), nodes_per_ld=c.nodes_per_ld,
                            notes=c.check()) for c in builtin_cases()]


@app.post("/jump", response_model=schemas.JumpResponse)
def jump(req: schemas.JumpRequest):
    try:
        ent = jump_entropy(req.mach, req.gamma)
        src = jump_source(req.mach, req.gamma)
    except DomainError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    out = schemas.JumpResponse(mach=req.mach, gamma=req.gamma, entropy=ent.as_dict(), source=src.as_dict())
    try:
        out.decoupled = schemas.Ratios(**jump_decoupled(req.mach, req.gamma).as_dict())
    except DomainError as exc:
        out.decoupled_error = str(exc)
    return out


@app.post("/wave/sample", response_model=schemas.WaveSampleResponse)
def wave_sample(req: schemas.WaveSampleRequest):
    case = _case(req.case)
    prof = AnalyticProfile.build(case.states(), case.params, case.x0)
    x = np.asarray(req.x, dtype=float) if req.x else np.linspace(0.0, case.length, req.points)
    xi = x - prof.shock_position(req.t)
    pe, te = prof.sample_xi(xi)
    ee = te / (case.params.gamma - 1.0)
    text = csv_text(("x", "xi", "pe", "Te", "rho_e", "ee"), zip(x, xi, pe, te, pe / te, ee))
    return schemas.WaveSampleResponse(case=case.name, t=req.t, shock_position=prof.shock_position(req.t),
                                      csv=text)


def _config(req: schemas.SchemeOptions) -> SchemeConfig:
    return SchemeConfig(scheme=req.scheme, flux=req.flux, courant=req.courant,
                        fourier_constant=req.fourier_constant, correction_cutoff=req.correction_cutoff,
                        corrections=req.corrections, wave_at_shock=req.wave_at_shock,
                        clamp_fourier=req.clamp_fourier)


@app.post("/run", response_model=schemas.RunResponse)
def run(req: schemas.RunRequest):
    case = _case(req.case, req.case_config, req.n_cells)
    try:
        cr = run_case(case, _config(req), t_final=req.t_final, output_times=tuple(req.output_times))
    except (PositivityError, BoundaryInteractionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    csvs = {f"t{fmt(snap.time)}": cr.csv(i) for i, snap in enumerate(cr.result.snapshots)}
    return schemas.RunResponse(metadata=jsonable(cr.metadata), csv=csvs)


@app.post("/sweep/d", response_model=schemas.SweepResponse)
def sweep_d(req: schemas.DSweepRequest):
    if req.d_min >= req.d_max:
        raise HTTPException(status_code=422, detail="d_min must be below d_max")
    rows = d_sweep(tuple(req.variants), req.points, req.d_min, req.d_max, req.n_cells)
    slopes = {}
    for v in req.variants:
        try:
            slopes[v] = sweep_slopes(rows, v)
        except ValueError as exc:
            slopes[v] = {"error": str(exc)}
    return schemas.SweepResponse(rows=jsonable(rows), csv=d_sweep_csv(rows), slopes=jsonable(slopes))


@app.post("/sweep/courant", response_model=schemas.SweepResponse)
def sweep_courant(req: schemas.CourantSweepRequest):
    if any(not 0.0 < c <= 1.0 for c in req.courants):
        raise HTTPException(status_code=422, detail="courant numbers must lie in (0, 1]")
    case = _case(req.case, None, req.n_cells)
    rows = courant_sweep(case, tuple(req.courants))
    return schemas.SweepResponse(rows=jsonable(rows), csv=csv_text(COURANT_COLUMNS, rows))


@app.post("/coupled/sweep", response_model=schemas.SweepResponse)
def coupled_sweep(req: schemas.CoupledSweepRequest):
    if req.mach_min > req.mach_max:
        raise HTTPException(status_code=422, detail="mach_min must not exceed mach_max")
    case = _case(req.case)
    machs = np.linspace(req.mach_min, req.mach_max, req.points)
    rows = mach_sweep(machs, case.right_heavy, case.right_electron, case.params, req.tolerance)
    return schemas.SweepResponse(rows=jsonable(rows), csv=csv_text(SWEEP_COLUMNS, rows))


@app.post("/verify", response_model=schemas.VerifyResponse)
def verify(req: schemas.VerifyRequest):
    numbers = req.criteria or sorted(CHECKS)
    unknown = [n for n in numbers if n not in CHECKS]
    if unknown:
        raise HTTPException(status_code=422, detail=f"unknown criteria {unknown}")
    results = []
    for n in numbers:
        r = run_check(n)
        results.append(schemas.CheckOut(number=r.number, title=r.title, passed=r.passed,
                                        unexpected_failures=r.unexpected_failures,
                                        checks={k: bool(v) for k, v in r.checks.items()},
                                        values=jsonable(r.values), seconds=r.seconds, line=r.line()))
    return schemas.VerifyResponse(passed=all(r.passed for r in results),
                                  only_known_failures=not any(r.unexpected_failures for r in results),
                                  results=results)
