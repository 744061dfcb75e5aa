"""Shared state types, equation of state and the prescribed heavy-particle field.

All quantities are nondimensional. A wave is a right-going 3-shock of the
heavy Euler system travelling at speed ``sigma``; the electron variables are
carried on top of it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace


class DomainError(ValueError):
    """Raised when an input lies outside the admissible set of a formula."""


@dataclass(frozen=True)
class GasParams:
    gamma: float = 5.0 / 3.0
    D: float = 0.1
    lam: float = 0.001

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise DomainError(f"gamma must exceed 1, got {self.gamma}")
        if self.D < 0.0 or self.lam < 0.0:
            raise DomainError("diffusion coefficients must be non-negative")

    def kappa(self, rho_e: float) -> float:
        """Electron thermal diffusivity (gamma-1) lambda / (gamma rho_e)."""
        return (self.gamma - 1.0) * self.lam / (self.gamma * rho_e)

    @classmethod
    def from_kappa(cls, gamma: float, D: float, kappa: float, rho_e: float) -> "GasParams":
        return cls(gamma=gamma, D=D, lam=kappa * gamma * rho_e / (gamma - 1.0))


@dataclass(frozen=True)
class HeavyState:
    rho_h: float
    u: float
    p: float

    def __post_init__(self):
        if not (self.rho_h > 0.0 and self.p > 0.0):
            raise DomainError(f"non-physical heavy state {self}")

    def total_energy(self, gamma: float) -> float:
        return 0.5 * self.rho_h * self.u**2 + self.p / (gamma - 1.0)


@dataclass(frozen=True)
class ElectronState:
    rho_e: float
    pe: float

    def __post_init__(self):
        if not (self.rho_e > 0.0 and self.pe > 0.0):
            raise DomainError(f"non-physical electron state {self}")

    @property
    def Te(self) -> float:
        return self.pe / self.rho_e

    def ee(self, gamma: float) -> float:
        """Specific electron thermal energy."""
        return self.pe / ((gamma - 1.0) * self.rho_e)

    @classmethod
    def from_temperature(cls, rho_e: float, Te: float) -> "ElectronState":
        return cls(rho_e=rho_e, pe=rho_e * Te)


@dataclass(frozen=True)
class WaveStates:
    """Far-field states of a 3-wave and its speed."""

    right_heavy: HeavyState
    right_electron: ElectronState
    left_heavy: HeavyState
    left_electron: ElectronState
    sigma: float
    gamma: float = 5.0 / 3.0

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise DomainError("wave speed must be positive")

    @property
    def c_r(self) -> float:
        return sound_speed(self.right_heavy.rho_h, self.right_heavy.p, self.gamma)

    @property
    def c_l(self) -> float:
        return sound_speed(self.left_heavy.rho_h, self.left_heavy.p, self.gamma)

    @property
    def mach_r(self) -> float:
        return (self.sigma - self.right_heavy.u) / self.c_r

    @property
    def mach_l(self) -> float:
        return (self.sigma - self.left_heavy.u) / self.c_l

    @property
    def velocity_jump(self) -> float:
        """u_r - u_l, i.e. the jump (0+) - (0-); negative for a 3-shock."""
        return self.right_heavy.u - self.left_heavy.u

    def is_lax_3shock(self) -> bool:
        return self.mach_r > 1.0 and self.mach_l < 1.0

    def with_sigma(self, sigma: float) -> "WaveStates":
        return replace(self, sigma=sigma)


def sound_speed(rho_h: float, p: float, gamma: float) -> float:
    if rho_h <= 0.0 or p <= 0.0:
        raise DomainError(f"sound speed needs rho_h > 0 and p > 0, got {rho_h}, {p}")
    return math.sqrt(gamma * p / rho_h)


def prescribed_heavy_fields(states: WaveStates, x0: float, x: float, t: float) -> HeavyState:
    """Heavy state at (x, t); the point xi = 0 itself belongs to the right state."""
    xi = x - x0 - states.sigma * t
    return states.left_heavy if xi < 0.0 else states.right_heavy
