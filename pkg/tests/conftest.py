import math

import pytest
from hypothesis import settings

# first calls compile the numba kernels
settings.register_profile("default", deadline=None)
settings.load_profile("default")

from twotemp.core import ElectronState, GasParams, HeavyState
from twotemp.jumps import build_wave_states

GAMMA = 5.0 / 3.0


@pytest.fixture(scope="session")
def case_a_states():
    """Right state of the over/under-resolved travelling-wave cases, M = 1.1832."""
    return build_wave_states(HeavyState(1.0, 0.2, 1.0), ElectronState(0.01, 0.1), 1.1832, GAMMA)


@pytest.fixture(scope="session")
def params_hd():
    return GasParams(gamma=GAMMA, D=0.1, lam=1e-3)


@pytest.fixture(scope="session")
def params_wd():
    return GasParams(gamma=GAMMA, D=1e-3, lam=1e-3)


def rel(a, b):
    return abs(a - b) / abs(b)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n].line())
