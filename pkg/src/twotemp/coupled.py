"""Travelling-wave structure of the fully coupled two-temperature system.

In the wave frame the five balance laws integrate once in xi, which leaves
three algebraic invariants (mass, momentum, electron mass with diffusion)
plus the total-energy invariant containing the diffusive fluxes. The
remaining unknowns (pe, Te, u) then obey a 3x3 autonomous ODE system.

The missing electron jump condition is found by shooting: left equilibria
are parameterised by their electron pressure, integrated towards the right
and bisected until the far field matches the requested right state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .core import DomainError, ElectronState, GasParams, HeavyState, sound_speed
from .jumps import density_ratio, jump_decoupled, jump_entropy, jump_source, rh_3shock


class ShootingError(RuntimeError):
    """No bracket (or no admissible trajectory) was found for the shooting parameter."""

    def __init__(self, message: str, scan: list | None = None):
        super().__init__(message)
        self.scan = scan or []


@dataclass(frozen=True)
class CoupledPoint:
    pe: float
    Te: float
    u: float

    def as_array(self) -> np.ndarray:
        return np.array([self.pe, self.Te, self.u])


@dataclass(frozen=True)
class FirstIntegrals:
    """Constants of the once-integrated wave-frame system.

    m = rho_h (u - sigma), c_mom = m u + p, c_en = F_E(u) - lam Te' - g/(g-1) D pe',
    c_emass = rho_e (u - sigma) - D pe'/Te, with p the total pressure and
    F_E(u) = E (u - sigma) + p u.
    """

    m: float
    c_mom: float
    c_en: float
    c_emass: float
    sigma: float
    gamma: float

    @classmethod
    def from_equilibrium(cls, heavy: HeavyState, electron: ElectronState, sigma: float,
                         gamma: float) -> "FirstIntegrals":
        m = heavy.rho_h * (heavy.u - sigma)
        c_mom = m * heavy.u + heavy.p
        c_en = heavy.total_energy(gamma) * (heavy.u - sigma) + heavy.p * heavy.u
        return cls(m=m, c_mom=c_mom, c_en=c_en, c_emass=electron.rho_e * (heavy.u - sigma),
                   sigma=sigma, gamma=gamma)

    def heavy_at(self, u: float) -> tuple[float, float]:
        """(rho_h, total pressure) recovered from the velocity."""
        return self.m / (u - self.sigma), self.c_mom - self.m * u

    def energy_flux(self, u: float) -> float:
        rho, p = self.heavy_at(u)
        e_tot = 0.5 * rho * u * u + p / (self.gamma - 1.0)
        return e_tot * (u - self.sigma) + p * u

    def residuals(self, point: CoupledPoint, dpe: float, dte: float, params: GasParams) -> np.ndarray:
        """Differences between the invariants recomputed at a point and the stored ones."""
        g = self.gamma
        rho_e = point.pe / point.Te
        c_en = self.energy_flux(point.u) - params.lam * dte - g / (g - 1.0) * params.D * dpe
        c_emass = rho_e * (point.u - self.sigma) - params.D * dpe / point.Te
        return np.array([c_en - self.c_en, c_emass - self.c_emass])


def heavy_entropy(point: CoupledPoint, integrals: FirstIntegrals) -> float:
    """p_h |u - sigma|^gamma, constant wherever the heavy flow is smooth."""
    _, p = integrals.heavy_at(point.u)
    return (p - point.pe) * abs(point.u - integrals.sigma) ** integrals.gamma


def coupled_rhs(point: CoupledPoint, integrals: FirstIntegrals, params: GasParams,
                frozen_velocity: bool = False, electron_energy_flux: float = 0.0) -> np.ndarray:
    """(pe', Te', u') of the wave-frame system.

    With ``frozen_velocity`` the heavy velocity is held fixed and Te' comes
    from the electron energy balance alone,
    lam Te' = pe (u - sigma)/(g-1) - g/(g-1) D pe' - electron_energy_flux,
    which recovers the linear system of the decoupled problem.
    """
    g = integrals.gamma
    pe, te, u = point.pe, point.Te, point.u
    w = u - integrals.sigma
    if params.D <= 0.0 or params.lam <= 0.0:
        raise DomainError("coupled wave needs D > 0 and lam > 0")
    dpe = (pe * w - integrals.c_emass * te) / params.D
    if frozen_velocity:
        dte = (pe * w / (g - 1.0) - g / (g - 1.0) * params.D * dpe - electron_energy_flux) / params.lam
        return np.array([dpe, dte, 0.0])
    dte = (integrals.energy_flux(u) - integrals.c_en - g / (g - 1.0) * params.D * dpe) / params.lam
    _, p = integrals.heavy_at(u)
    denom = g * (p - pe) - integrals.m * w
    if denom == 0.0:
        raise DomainError("heavy sonic point: the smooth branch ends here")
    du = dpe * w / denom
    return np.array([dpe, dte, du])


def jacobian(f, y: np.ndarray, rel_step: float = 1e-6) -> np.ndarray:
    n = y.size
    jac = np.zeros((n, n))
    for i in range(n):
        h = rel_step * max(1.0, abs(y[i]))
        e = np.zeros(n)
        e[i] = h
        jac[:, i] = (f(y + e) - f(y - e)) / (2.0 * h)
    return jac


def frozen_velocity_eigenvalues(heavy: HeavyState, electron: ElectronState, sigma: float,
                                params: GasParams) -> np.ndarray:
    """Eigenvalues of the (pe, Te) Jacobian with the velocity frozen at ``heavy.u``.

    The frozen system is linear, so the central difference is exact up to rounding.
    """
    integ = FirstIntegrals.from_equilibrium(heavy, electron, sigma, params.gamma)
    flux = electron.pe * (heavy.u - sigma) / (params.gamma - 1.0)

    def f(y):
        return coupled_rhs(CoupledPoint(y[0], y[1], heavy.u), integ, params, frozen_velocity=True,
                           electron_energy_flux=flux)[:2]

    y0 = np.array([electron.pe, electron.Te])
    return np.sort(np.linalg.eigvals(jacobian(f, y0)).real)


# --------------------------------------------------------------------------
# trajectories


@dataclass
class WaveTrajectory:
    xi: np.ndarray
    pe: np.ndarray
    Te: np.ndarray
    u: np.ndarray
    integrals: FirstIntegrals
    start: CoupledPoint
    heavy_jump: bool
    status: str
    sol: object = field(default=None, repr=False)

    @property
    def end(self) -> CoupledPoint:
        return CoupledPoint(float(self.pe[-1]), float(self.Te[-1]), float(self.u[-1]))

    @property
    def admissible(self) -> bool:
        return self.status == "ok"

    def entropy_drift(self) -> float:
        """Max relative change of the heavy entropy invariant along the trajectory."""
        s = np.array([heavy_entropy(CoupledPoint(a, b, c), self.integrals)
                      for a, b, c in zip(self.pe, self.Te, self.u)])
        return float(np.max(np.abs(s / s[0] - 1.0)))

    def integral_drift(self, params: GasParams) -> float:
        """Max relative residual of the energy and electron-mass invariants."""
        worst = 0.0
        scale = np.array([abs(self.integrals.c_en), abs(self.integrals.c_emass)])
        for a, b, c in zip(self.pe, self.Te, self.u):
            pt = CoupledPoint(a, b, c)
            d = coupled_rhs(pt, self.integrals, params)
            r = np.abs(self.integrals.residuals(pt, d[0], d[1], params)) / scale
            worst = max(worst, float(r.max()))
        return worst

    def effective_width(self, fraction: float = 0.99) -> float:
        """Distance over which pe covers ``fraction`` of its total variation from the start."""
        total = self.pe[-1] - self.pe[0]
        if total == 0.0:
            return 0.0
        covered = (self.pe - self.pe[0]) / total
        idx = np.nonzero(covered >= fraction)[0]
        if idx.size == 0:
            return float(self.xi[-1] - self.xi[0])
        return float(self.xi[idx[0]] - self.xi[0])


def _heavy_mach(heavy_p: float, pe: float, rho: float, w: float, gamma: float) -> float:
    ph = heavy_p - pe
    if ph <= 0.0:
        return math.nan
    return abs(w) / sound_speed(rho, ph, gamma)


def integrate_wave(left_heavy: HeavyState, left_pe: float, left_rho_e: float,
                   integrals: FirstIntegrals, params: GasParams, xi_span: float,
                   perturbation: float = 1e-8, toward_u: float | None = None,
                   rtol: float = 1e-10, atol: float = 1e-12) -> WaveTrajectory:
    """Integrate from a left equilibrium towards the right.

    If the heavy flow at the left state is subsonic relative to the wave, the
    trajectory starts with a heavy Rankine-Hugoniot jump to the supersonic
    partner state (pe and Te continuous). Otherwise it leaves the equilibrium
    along its unstable eigenvector, oriented towards ``toward_u``.
    """
    g = integrals.gamma
    te = left_pe / left_rho_e
    w = left_heavy.u - integrals.sigma
    mach_h = _heavy_mach(left_heavy.p, left_pe, left_heavy.rho_h, w, g)
    if not mach_h > 0.0:
        raise DomainError("left electron pressure exceeds the total pressure")

    def f(xi, y):
        return coupled_rhs(CoupledPoint(y[0], y[1], y[2]), integrals, params)

    heavy_jump = mach_h < 1.0
    if heavy_jump:
        m0sq = ((g - 1.0) * mach_h**2 + 2.0) / (2.0 * g * mach_h**2 - (g - 1.0))
        rho0 = left_heavy.rho_h * ((g - 1.0) * m0sq + 2.0) / ((g + 1.0) * m0sq)
        y0 = np.array([left_pe, te, integrals.sigma + integrals.m / rho0])
    else:
        y_eq = np.array([left_pe, te, left_heavy.u])
        jac = jacobian(lambda y: f(0.0, y), y_eq)
        vals, vecs = np.linalg.eig(jac)
        k = int(np.argmax(vals.real))
        if not vals[k].real > 0.0:
            raise DomainError("left equilibrium has no unstable direction")
        v = vecs[:, k].real
        v = v / np.max(np.abs(v))
        target = toward_u if toward_u is not None else left_heavy.u + 1.0
        if v[2] * (target - left_heavy.u) < 0.0:
            v = -v
        y0 = y_eq + perturbation * v * np.maximum(np.abs(y_eq), 1.0)

    def sonic(xi, y):
        _, p = integrals.heavy_at(y[2])
        return g * (p - y[0]) - integrals.m * (y[2] - integrals.sigma)

    def pe_floor(xi, y):
        return y[0]

    def te_floor(xi, y):
        return y[1]

    for ev in (sonic, pe_floor, te_floor):
        ev.terminal = True
    sol = solve_ivp(f, (0.0, xi_span), y0, method="DOP853", rtol=rtol, atol=atol,
                    events=(sonic, pe_floor, te_floor), dense_output=True)
    status = "ok"
    if sol.status == 1:
        hit = [len(e) > 0 for e in sol.t_events]
        status = ("sonic", "pe<=0", "te<=0")[hit.index(True)]
    elif sol.status < 0:
        status = "failed"
    return WaveTrajectory(xi=sol.t, pe=sol.y[0], Te=sol.y[1], u=sol.y[2], integrals=integrals,
                          start=CoupledPoint(*y0), heavy_jump=heavy_jump, status=status, sol=sol)


# --------------------------------------------------------------------------
# shooting


@dataclass
class CoupledJumpResult:
    mach_r: float
    pe_ratio: float
    te_ratio: float
    right_achieved: CoupledPoint
    residual: float
    width: float
    heavy_jump: bool
    trajectory: WaveTrajectory | None = field(default=None, repr=False)


def _wave_setup(right_heavy: HeavyState, right_electron: ElectronState, mach_r: float, params: GasParams):
    left_heavy, sigma = rh_3shock(right_heavy, mach_r, params.gamma)
    integ = FirstIntegrals.from_equilibrium(right_heavy, right_electron, sigma, params.gamma)
    rho_e_l = right_electron.rho_e * density_ratio(mach_r, params.gamma)
    return left_heavy, sigma, integ, rho_e_l


def default_span(right_heavy: HeavyState, right_electron: ElectronState, mach_r: float,
                 params: GasParams, factor: float = 60.0) -> float:
    left_heavy, _ = rh_3shock(right_heavy, mach_r, params.gamma)
    du = abs(right_heavy.u - left_heavy.u)
    return factor * max(params.D, params.kappa(right_electron.rho_e)) / du


def shoot_jump(right_heavy: HeavyState, right_electron: ElectronState, mach_r: float,
               params: GasParams, tolerance: float = 1e-10, scan_points: int = 24,
               xi_span: float | None = None) -> CoupledJumpResult:
    """Left electron pressure whose trajectory lands on the requested right state.

    The residual pe_end / pe_R - 1 is bracketed on a log-spaced scan of
    pe_l over (0, p_l) and refined with Brent's method.
    """
    if not mach_r > 1.0:
        raise DomainError("shooting needs a supersonic right state")
    left_heavy, sigma, integ, rho_e_l = _wave_setup(right_heavy, right_electron, mach_r, params)
    span = xi_span if xi_span is not None else default_span(right_heavy, right_electron, mach_r, params)
    pe_r = right_electron.pe

    def traj(pe_l):
        return integrate_wave(left_heavy, pe_l, rho_e_l, integ, params, span, toward_u=right_heavy.u)

    def residual(pe_l):
        tr = traj(pe_l)
        if not tr.admissible:
            return None
        return tr.pe[-1] / pe_r - 1.0

    guess = pe_r * jump_decoupled(mach_r, params.gamma).pe_ratio if mach_r < 2.0 else None
    hi = left_heavy.p * (1.0 - 1e-6)
    candidates = list(np.geomspace(pe_r * 1e-2, hi, scan_points))
    if guess is not None and guess < hi:
        candidates += [guess * 0.9, guess, guess * 1.1]
    candidates = sorted(set(float(c) for c in candidates))
    scan = []
    for c in candidates:
        try:
            scan.append((c, residual(c)))
        except DomainError:
            scan.append((c, None))
    bracket = None
    admissible = [(c, r) for c, r in scan if r is not None]
    for (a, fa), (b, fb) in zip(admissible, admissible[1:]):
        if fa == 0.0:
            bracket = (a, a)
            break
        if fa * fb < 0.0:
            bracket = (a, b)
            break
    if bracket is None:
        raise ShootingError(f"no sign change of the shooting residual at M = {mach_r}", scan)

    def safe(pe_l):
        r = residual(pe_l)
        if r is None:
            raise ShootingError(f"inadmissible trajectory inside the bracket at pe_l = {pe_l}", scan)
        return r

    a, b = bracket
    root = a if a == b else brentq(safe, a, b, xtol=tolerance * pe_r, rtol=4 * np.finfo(float).eps,
                                   maxiter=200)
    tr = traj(root)
    res = tr.pe[-1] / pe_r - 1.0
    return CoupledJumpResult(
        mach_r=mach_r, pe_ratio=root / pe_r, te_ratio=(root / rho_e_l) / right_electron.Te,
        right_achieved=tr.end, residual=float(res), width=tr.effective_width(),
        heavy_jump=tr.heavy_jump, trajectory=tr,
    )


SWEEP_COLUMNS = ("mach", "coupled_pe", "coupled_te", "decoupled_pe", "decoupled_te",
                 "entropy_pe", "entropy_te", "source_pe", "source_te", "residual", "width", "status")


def mach_sweep(mach_values, right_heavy: HeavyState, right_electron: ElectronState,
               params: GasParams, tolerance: float = 1e-10) -> list[dict]:
    """Jump ratios of the coupled wave next to the three closed-form models.

    Failed shooting points are kept with NaN ratios and the error in ``status``.
    The decoupled model is NaN beyond its validity limit.
    """
    rows = []
    for mach in mach_values:
        mach = float(mach)
        row = {"mach": mach}
        if mach == 1.0:
            # sonic limit: no wave, every ratio is one
            row.update(coupled_pe=1.0, coupled_te=1.0, residual=0.0, width=0.0, status="ok")
        else:
            try:
                res = shoot_jump(right_heavy, right_electron, mach, params, tolerance)
                row.update(coupled_pe=res.pe_ratio, coupled_te=res.te_ratio, residual=res.residual,
                           width=res.width, status="ok")
            except (ShootingError, DomainError) as exc:
                row.update(coupled_pe=math.nan, coupled_te=math.nan, residual=math.nan,
                           width=math.nan, status=str(exc))
        try:
            dec = jump_decoupled(mach, params.gamma)
            row.update(decoupled_pe=dec.pe_ratio, decoupled_te=dec.te_ratio)
        except DomainError:
            row.update(decoupled_pe=math.nan, decoupled_te=math.nan)
        ent = jump_entropy(mach, params.gamma)
        src = jump_source(mach, params.gamma)
        row.update(entropy_pe=ent.pe_ratio, entropy_te=ent.te_ratio,
                   source_pe=src.pe_ratio, source_te=src.te_ratio)
        rows.append({k: row[k] for k in SWEEP_COLUMNS})
    return rows
