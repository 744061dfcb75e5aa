"""Built-in test cases, JSON case files and SI nondimensionalisation."""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .core import DomainError, ElectronState, GasParams, HeavyState, WaveStates
from .jumps import build_wave_states, char_lengths, mach_from_density_ratio

MU0 = 4.0e-7 * math.pi
CASE_TOLERANCE = 1e-2


class CaseError(ValueError):
    pass


@dataclass(frozen=True)
class ReferenceQuantities:
    """Scales used to make dimensional (SI) inputs nondimensional.

    The velocity scale is the Alfven speed b0 / sqrt(mu0 rho0); the field
    strength plays no other role.
    """

    rho0: float
    l0: float
    b0: float
    t0: float
    p0: float
    n0: float = 0.0

    @property
    def v0(self) -> float:
        return self.b0 / math.sqrt(MU0 * self.rho0)

    @property
    def time(self) -> float:
        return self.l0 / self.v0


PHOTOSPHERE = ReferenceQuantities(rho0=1.873e-4, l0=1.747e-6, b0=0.01, t0=6420.0, p0=9927.42, n0=1.12e23)


@dataclass(frozen=True)
class CaseSpec:
    name: str
    params: GasParams
    right_heavy: HeavyState
    right_electron: ElectronState
    mach_r: float
    n_cells: int
    length: float
    x0_fraction: float = 0.2
    t_final: float = 1.0
    schemes: tuple = ("A", "B", "C")
    output_times: tuple = ()
    reference: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_cells < 3 or not self.length > 0.0:
            raise CaseError(f"{self.name}: bad grid ({self.n_cells}, {self.length})")
        if not 0.0 < self.x0_fraction < 1.0:
            raise CaseError(f"{self.name}: x0_fraction must lie in (0, 1)")
        if not self.t_final > 0.0:
            raise CaseError(f"{self.name}: t_final must be positive")

    @property
    def x0(self) -> float:
        return self.x0_fraction * self.length

    @property
    def dx(self) -> float:
        return self.length / self.n_cells

    def states(self, model: str = "decoupled") -> WaveStates:
        return build_wave_states(self.right_heavy, self.right_electron, self.mach_r, self.params.gamma, model)

    def lengths(self):
        st = self.states()
        return char_lengths(self.params, self.right_electron.rho_e, st.velocity_jump)

    @property
    def nodes_per_ld(self) -> float:
        return self.lengths().l_d / self.dx

    def with_grid(self, n_cells: int, name: str | None = None) -> "CaseSpec":
        ref = dict(self.reference)
        if n_cells != self.n_cells:
            ref.pop("nodes_per_ld", None)
        return _replace(self, n_cells=n_cells, name=name or self.name, reference=ref)

    def with_diffusion(self, D: float, name: str | None = None) -> "CaseSpec":
        p = GasParams(gamma=self.params.gamma, D=D, lam=self.params.lam)
        return _replace(self, params=p, name=name or self.name, reference={})

    def check(self, tolerance: float = CASE_TOLERANCE) -> list[str]:
        """Compare recomputed states with stored reference values.

        Raises CaseError beyond ``tolerance``; returns notes on smaller mismatches.
        """
        try:
            st = self.states()
        except DomainError as exc:
            raise CaseError(f"{self.name}: {exc}") from exc
        computed = {
            "left_rho_h": st.left_heavy.rho_h, "left_u": st.left_heavy.u, "left_p": st.left_heavy.p,
            "left_rho_e": st.left_electron.rho_e, "left_pe": st.left_electron.pe,
        }
        lengths = char_lengths(self.params, self.right_electron.rho_e, st.velocity_jump)
        computed.update(l_d=lengths.l_d, nodes_per_ld=lengths.l_d / self.dx, kappa_r=lengths.kappa_r)
        # lengths in units of the reference length; the stored values use another unit
        verbatim = {"l_d_over_l0": lengths.l_d, "l_t_over_l0": lengths.l_t}
        notes = []
        for key, value in self.reference.items():
            if key in verbatim:
                rel = abs(verbatim[key] / value - 1.0)
                if rel > 1e-3:
                    notes.append(f"{self.name}: {key} reference value {value:.6g} vs recomputed {verbatim[key]:.6g}")
                continue
            if key not in computed:
                continue
            rel = abs(computed[key] / value - 1.0)
            if rel > tolerance:
                raise CaseError(f"{self.name}: {key} = {computed[key]:.6g} but the reference gives {value:.6g}")
            if rel > 1e-3:
                notes.append(f"{self.name}: {key} differs from the reference by {rel:.2e}")
        return notes

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "units": "nondimensional",
            "gamma": self.params.gamma,
            "D": self.params.D,
            "lam": self.params.lam,
            "right_heavy": asdict(self.right_heavy),
            "right_electron": asdict(self.right_electron),
            "mach_r": self.mach_r,
            "n_cells": self.n_cells,
            "length": self.length,
            "x0_fraction": self.x0_fraction,
            "t_final": self.t_final,
            "schemes": list(self.schemes),
            "output_times": list(self.output_times),
            "reference": dict(self.reference),
        }


def _replace(case: CaseSpec, **kw) -> CaseSpec:
    d = {f: getattr(case, f) for f in case.__dataclass_fields__}
    d.update(kw)
    return CaseSpec(**d)


# --------------------------------------------------------------------------
# built-in cases

_AB_RIGHT = (HeavyState(rho_h=1.0, u=0.2, p=1.0), ElectronState(rho_e=0.01, pe=0.1))
_AB_REFERENCE = {"left_rho_h": 1.274, "left_rho_e": 0.01274, "left_p": 1.5, "left_pe": 0.1556, "left_u": 0.527}
_SOLAR_REFERENCE = {"left_rho_h": 1.6962, "left_rho_e": 9.23e-4, "left_p": 1.5, "left_pe": 0.9454, "left_u": 0.6787,
                "kappa_r": 121970.96, "l_d_over_l0": 1.0, "l_t_over_l0": 11309.0,
                "dt_conv_1000": 22.33, "dt_fourier_1000": 0.4095, "dt_conv_5000": 4.466, "dt_fourier_5000": 0.0164}


def traveling_wave_case(name: str, D: float, n_cells: int = 2000, reference: dict | None = None) -> CaseSpec:
    ref = dict(_AB_REFERENCE)
    ref.update(reference or {})
    return CaseSpec(name=name, params=GasParams(gamma=5.0 / 3.0, D=D, lam=1e-3),
                    right_heavy=_AB_RIGHT[0], right_electron=_AB_RIGHT[1], mach_r=1.1832,
                    n_cells=n_cells, length=10.0, x0_fraction=0.2, t_final=1.0, reference=ref)


def solar_case(n_cells: int = 1000) -> CaseSpec:
    gamma = 5.0 / 3.0
    right_e = ElectronState(rho_e=5.44e-4, pe=0.2987)
    params = GasParams.from_kappa(gamma, 10.7853, _SOLAR_REFERENCE["kappa_r"], right_e.rho_e)
    name = "solar" if n_cells == 1000 else f"solar{n_cells}"
    return CaseSpec(name=name, params=params, right_heavy=HeavyState(rho_h=1.0, u=0.07, p=0.5974),
                    right_electron=right_e, mach_r=mach_from_density_ratio(1.6962, gamma),
                    n_cells=n_cells, length=2e5, x0_fraction=0.2, t_final=30000.0,
                    reference=dict(_SOLAR_REFERENCE))


def d_sweep_values(points: int = 9, d_min: float = 1e-3, d_max: float = 1e-1) -> np.ndarray:
    return np.geomspace(d_min, d_max, points)


def d_sweep_cases(points: int = 9) -> list[CaseSpec]:
    return [traveling_wave_case(f"dsweep-{D:.4g}", float(D)) for D in d_sweep_values(points)]


def builtin_cases() -> list[CaseSpec]:
    cases = [traveling_wave_case("caseHD", 0.1, reference={"l_d": 0.3055, "nodes_per_ld": 61.1}),
             traveling_wave_case("caseWD", 1e-3, reference={"l_d": 3.055e-3, "nodes_per_ld": 0.611}),
             solar_case(1000), solar_case(5000)]
    cases += d_sweep_cases()
    for c in cases:
        c.check()
    return cases


def get_case(name: str) -> CaseSpec:
    for c in builtin_cases():
        if c.name == name:
            return c
    raise CaseError(f"unknown case {name!r}; known: {', '.join(c.name for c in builtin_cases())}")


# --------------------------------------------------------------------------
# JSON files

_REQUIRED = ("name", "gamma", "D", "right_heavy", "right_electron", "n_cells", "length", "t_final")


def case_from_dict(data: dict, refs: ReferenceQuantities = PHOTOSPHERE) -> CaseSpec:
    missing = [k for k in _REQUIRED if k not in data]
    if missing:
        raise CaseError(f"case file misses {missing}")
    units = data.get("units", "nondimensional")
    if units not in ("nondimensional", "si"):
        raise CaseError(f"units must be 'nondimensional' or 'si', got {units!r}")
    if "lam" not in data and "kappa_r" not in data:
        raise CaseError("case file needs lam or kappa_r")
    if "mach_r" not in data and "left_rho_h" not in data:
        raise CaseError("case file needs mach_r or left_rho_h")
    try:
        rh = HeavyState(**data["right_heavy"])
        re = ElectronState(**data["right_electron"])
    except (TypeError, DomainError) as exc:
        raise CaseError(f"bad state in case file: {exc}") from exc
    gamma = float(data["gamma"])
    D = float(data["D"])
    length = float(data["length"])
    t_final = float(data["t_final"])
    kappa = data.get("kappa_r")
    lam = data.get("lam")
    output_times = tuple(float(t) for t in data.get("output_times", ()))
    # ratio taken before scaling so that it is unit-free
    left_ratio = float(data["left_rho_h"]) / rh.rho_h if "left_rho_h" in data else None
    if units == "si":
        rh, re, D, lam, kappa, length, t_final, output_times = _nondimensionalise(
            rh, re, D, lam, kappa, length, t_final, output_times, refs)
    try:
        params = (GasParams(gamma=gamma, D=D, lam=float(lam)) if lam is not None
                  else GasParams.from_kappa(gamma, D, float(kappa), re.rho_e))
        mach = (float(data["mach_r"]) if "mach_r" in data
                else mach_from_density_ratio(left_ratio, gamma))
    except DomainError as exc:
        raise CaseError(str(exc)) from exc
    case = CaseSpec(name=str(data["name"]), params=params, right_heavy=rh, right_electron=re,
                    mach_r=mach, n_cells=int(data["n_cells"]), length=length,
                    x0_fraction=float(data.get("x0_fraction", 0.2)), t_final=t_final,
                    schemes=tuple(data.get("schemes", ("A", "B", "C"))), output_times=output_times,
                    reference=dict(data.get("reference", {})))
    if mach >= math.sqrt(2.0 * gamma / (gamma - 1.0)):
        warnings.warn(f"{case.name}: Mach {mach:.4g} is beyond the decoupled validity limit; "
                      "only coupled runs are meaningful", stacklevel=2)
    else:
        case.check()
    return case


def _nondimensionalise(rh, re, D, lam, kappa, length, t_final, output_times, refs):
    """SI -> nondimensional. Lengths by l0, speeds by v0, densities by rho0, pressures by p0."""
    v0, l0 = refs.v0, refs.l0
    rh = HeavyState(rho_h=rh.rho_h / refs.rho0, u=rh.u / v0, p=rh.p / refs.p0)
    re = ElectronState(rho_e=re.rho_e / refs.rho0, pe=re.pe / refs.p0)
    D = D / (l0 * v0)
    if kappa is not None:
        kappa = float(kappa) / (l0 * v0)
    if lam is not None:
        # heat flux lam dT/dx scales with p0 v0 and temperature with t0
        lam = float(lam) * refs.t0 / (refs.p0 * v0 * l0)
    return (rh, re, D, lam, kappa, length / l0, t_final / refs.time,
            tuple(t / refs.time for t in output_times))


def load_case(path) -> CaseSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CaseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise CaseError(f"{path}: top level must be an object")
    return case_from_dict(data)


def dump_case(case: CaseSpec, path) -> None:
    Path(path).write_text(json.dumps(case.to_dict(), indent=2, sort_keys=True) + "\n")
