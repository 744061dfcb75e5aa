"""Closed-form travelling wave of the decoupled electron system.

Behind the wave (xi < 0) the electrons sit in the constant left state; ahead
of it pe and Te relax to the right state as a sum of two decaying
exponentials. The profile is continuous with a kink in pe at xi = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, ElectronState, GasParams, WaveStates


@dataclass(frozen=True)
class WaveCoefficients:
    eta_r: float
    r_r: float
    kappa_r: float
    delta_plus: float
    delta_minus: float


def wave_coefficients(params: GasParams, right: ElectronState, c_r: float, mach_r: float) -> WaveCoefficients:
    """Decay rates of the linear system satisfied ahead of the wave."""
    if params.D <= 0.0 or params.lam <= 0.0:
        raise DomainError("analytic profile requires D > 0 and lambda > 0")
    kappa_r = params.kappa(right.rho_e)
    eta = -c_r * mach_r / params.D
    r = params.D / kappa_r
    disc = (1.0 + r) ** 2 - 4.0 * r / params.gamma
    root = math.sqrt(disc)
    return WaveCoefficients(
        eta_r=eta,
        r_r=r,
        kappa_r=kappa_r,
        delta_plus=0.5 * eta * (1.0 + r + root),
        delta_minus=0.5 * eta * (1.0 + r - root),
    )


def profile_constants(states: WaveStates, coeffs: WaveCoefficients) -> tuple[float, float]:
    """Integration constants K+ and K- from continuity of pe and Te at xi = 0."""
    el, er = states.left_electron, states.right_electron
    a_p = 1.0 - coeffs.delta_plus / coeffs.eta_r
    a_m = 1.0 - coeffs.delta_minus / coeffs.eta_r
    mat = np.array([[er.rho_e, er.rho_e], [a_p, a_m]])
    if abs(np.linalg.det(mat)) < 1e-14 * er.rho_e:
        raise DomainError("degenerate eigenvalues: K+/K- system is singular")
    k_plus, k_minus = np.linalg.solve(mat, [el.pe - er.pe, el.Te - er.Te])
    return float(k_plus), float(k_minus)


@dataclass(frozen=True)
class AnalyticProfile:
    states: WaveStates
    params: GasParams
    x0: float
    coeffs: WaveCoefficients
    k_plus: float
    k_minus: float

    @classmethod
    def build(cls, states: WaveStates, params: GasParams, x0: float = 0.0) -> "AnalyticProfile":
        coeffs = wave_coefficients(params, states.right_electron, states.c_r, states.mach_r)
        kp, km = profile_constants(states, coeffs)
        return cls(states=states, params=params, x0=x0, coeffs=coeffs, k_plus=kp, k_minus=km)

    @property
    def eta_r(self):
        return self.coeffs.eta_r

    @property
    def delta_plus(self):
        return self.coeffs.delta_plus

    @property
    def delta_minus(self):
        return self.coeffs.delta_minus

    def _te_amplitudes(self):
        c = self.coeffs
        return (1.0 - c.delta_plus / c.eta_r) * self.k_plus, (1.0 - c.delta_minus / c.eta_r) * self.k_minus

    def shock_position(self, t: float) -> float:
        return self.x0 + self.states.sigma * t

    def sample_xi(self, xi) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised (pe, Te) at wave coordinates xi."""
        xi = np.asarray(xi, dtype=float)
        er, el = self.states.right_electron, self.states.left_electron
        c = self.coeffs
        xp = np.maximum(xi, 0.0)
        ep = np.exp(c.delta_plus * xp)
        em = np.exp(c.delta_minus * xp)
        tp, tm = self._te_amplitudes()
        pe = er.pe + er.rho_e * (self.k_plus * ep + self.k_minus * em)
        te = er.Te + tp * ep + tm * em
        behind = xi <= 0.0
        pe = np.where(behind, el.pe, pe)
        te = np.where(behind, el.Te, te)
        return pe, te

    def sample(self, x, t: float) -> tuple[np.ndarray, np.ndarray]:
        return self.sample_xi(np.asarray(x, dtype=float) - self.shock_position(t))

    def conserved(self, x, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Point values of (rho_e, rho_e e_e) for initialising a finite-volume field."""
        pe, te = self.sample(x, t)
        return pe / te, pe / (self.params.gamma - 1.0)

    def evaluate(self, x: float, t: float) -> ElectronState:
        pe, te = self.sample_xi(x - self.shock_position(t))
        return ElectronState.from_temperature(float(pe / te), float(te))

    def right_derivatives(self) -> tuple[float, float]:
        """(pe'(0+), Te'(0+)); derivatives behind the wave are zero."""
        c = self.coeffs
        tp, tm = self._te_amplitudes()
        rho_r = self.states.right_electron.rho_e
        dpe = rho_r * (c.delta_plus * self.k_plus + c.delta_minus * self.k_minus)
        dte = c.delta_plus * tp + c.delta_minus * tm
        return dpe, dte


def compatibility_residual(profile: AnalyticProfile) -> tuple[float, float]:
    """Residuals of D [pe'] = pe(0) [u] and [Te'] = 0 at the weak discontinuity."""
    dpe, dte = profile.right_derivatives()
    er = profile.states.right_electron
    pe0 = er.pe + er.rho_e * (profile.k_plus + profile.k_minus)
    res_pe = profile.params.D * dpe - pe0 * profile.states.velocity_jump
    return res_pe, dte
