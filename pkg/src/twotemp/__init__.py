"""Two-temperature plasma shock waves: jump relations, analytic waves, finite volumes, coupled ODEs."""
from .analytic import AnalyticProfile
from .cases import CaseSpec, builtin_cases, get_case, load_case
from .core import DomainError, ElectronState, GasParams, HeavyState, WaveStates
from .fv import Grid1D, SchemeConfig, run, step
from .jumps import build_wave_states, jump_decoupled, jump_entropy, jump_source, rh_3shock

__version__ = "0.1.0"

__all__ = [
    "AnalyticProfile", "CaseSpec", "DomainError", "ElectronState", "GasParams", "Grid1D", "HeavyState",
    "SchemeConfig", "WaveStates", "build_wave_states", "builtin_cases", "get_case", "jump_decoupled",
    "jump_entropy", "jump_source", "load_case", "rh_3shock", "run", "step",
]
