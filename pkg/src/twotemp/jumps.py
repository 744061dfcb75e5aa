"""Jump conditions across the 3-wave.

Heavy particles obey the gamma-law Rankine-Hugoniot relations. For the
electrons three closures are provided: the travelling-wave result of the
decoupled drift-diffusion system, electron-entropy conservation, and the
source-term treatment of the nonconservative product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DomainError, ElectronState, GasParams, HeavyState, WaveStates, sound_speed


@dataclass(frozen=True)
class JumpRatios:
    """Left/right ratios of electron pressure, temperature and density."""

    pe_ratio: float
    te_ratio: float
    rhoe_ratio: float

    def as_dict(self) -> dict:
        return {"pe_ratio": self.pe_ratio, "te_ratio": self.te_ratio, "rhoe_ratio": self.rhoe_ratio}


@dataclass(frozen=True)
class CharLengths:
    l_d: float
    l_t: float
    kappa_r: float


def density_ratio(mach_r: float, gamma: float) -> float:
    m2 = mach_r * mach_r
    return (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0)


def pressure_ratio(mach_r: float, gamma: float) -> float:
    m2 = mach_r * mach_r
    return (2.0 * gamma * m2 - (gamma - 1.0)) / (gamma + 1.0)


def rh_3shock(right: HeavyState, mach_r: float, gamma: float) -> tuple[HeavyState, float]:
    """Post-shock (left) heavy state and wave speed of a 3-shock.

    Parameters
    ----------
    right : HeavyState
        Pre-shock state ahead of the wave.
    mach_r : float
        (sigma - u_r) / c_r, must be >= 1.
    gamma : float
        Adiabatic index.

    Returns
    -------
    left : HeavyState
    sigma : float
    """
    if mach_r < 1.0:
        raise DomainError(f"mach_r = {mach_r} < 1 is not a Lax 3-shock")
    c_r = sound_speed(right.rho_h, right.p, gamma)
    sigma = right.u + mach_r * c_r
    r = density_ratio(mach_r, gamma)
    u_l = sigma - (sigma - right.u) / r
    left = HeavyState(rho_h=right.rho_h * r, u=u_l, p=right.p * pressure_ratio(mach_r, gamma))
    return left, sigma


def mach_from_density_ratio(ratio: float, gamma: float) -> float:
    """Invert the RH density ratio for the upstream Mach number."""
    limit = (gamma + 1.0) / (gamma - 1.0)
    if not 1.0 <= ratio < limit:
        raise DomainError(f"density ratio {ratio} outside [1, {limit})")
    return math.sqrt(2.0 * ratio / ((gamma + 1.0) - (gamma - 1.0) * ratio))


def decoupled_mach_limit(gamma: float) -> float:
    return math.sqrt(2.0 * gamma / (gamma - 1.0))


def jump_decoupled(mach_r: float, gamma: float) -> JumpRatios:
    m2 = mach_r * mach_r
    den = (1.0 - gamma) * m2 + 2.0 * gamma
    if den <= 0.0:
        raise DomainError(
            f"decoupled jump undefined for M^2 = {m2:.6g} >= 2 gamma/(gamma-1) = {2 * gamma / (gamma - 1):.6g}"
        )
    if mach_r < 1.0:
        raise DomainError(f"mach_r = {mach_r} < 1")
    rho = density_ratio(mach_r, gamma)
    te = ((gamma - 1.0) * m2 + 2.0) / den
    return JumpRatios(pe_ratio=rho * te, te_ratio=te, rhoe_ratio=rho)


def jump_entropy(mach_r: float, gamma: float) -> JumpRatios:
    if mach_r < 1.0:
        raise DomainError(f"mach_r = {mach_r} < 1")
    base = density_ratio(mach_r, gamma)
    return JumpRatios(pe_ratio=base**gamma, te_ratio=base ** (gamma - 1.0), rhoe_ratio=base)


def jump_source(mach_r: float, gamma: float) -> JumpRatios:
    if mach_r < 1.0:
        raise DomainError(f"mach_r = {mach_r} < 1")
    base = density_ratio(mach_r, gamma)
    return JumpRatios(pe_ratio=base, te_ratio=1.0, rhoe_ratio=base)


JUMP_MODELS = {"decoupled": jump_decoupled, "entropy": jump_entropy, "source": jump_source}


def char_lengths(params: GasParams, rho_e_r: float, velocity_jump: float) -> CharLengths:
    """Electron-diffusion and heat-conduction lengths D/|du| and kappa_R/|du|."""
    du = abs(velocity_jump)
    if du == 0.0:
        raise DomainError("zero velocity jump gives infinite diffusion lengths")
    kappa_r = params.kappa(rho_e_r)
    return CharLengths(l_d=params.D / du, l_t=kappa_r / du, kappa_r=kappa_r)


def build_wave_states(right_heavy: HeavyState, right_electron: ElectronState,
                      mach_r: float, gamma: float, model: str = "decoupled") -> WaveStates:
    """Complete a right state into a 3-wave using RH for heavies and `model` for electrons."""
    left_heavy, sigma = rh_3shock(right_heavy, mach_r, gamma)
    ratios = JUMP_MODELS[model](mach_r, gamma)
    left_electron = ElectronState(rho_e=right_electron.rho_e * ratios.rhoe_ratio,
                                  pe=right_electron.pe * ratios.pe_ratio)
    return WaveStates(right_heavy=right_heavy, right_electron=right_electron,
                      left_heavy=left_heavy, left_electron=left_electron,
                      sigma=sigma, gamma=gamma)
