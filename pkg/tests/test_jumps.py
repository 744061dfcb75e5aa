import math

import numpy as np
import pytest

from twotemp.core import DomainError, ElectronState, GasParams, HeavyState
from twotemp.jumps import (build_wave_states, char_lengths, decoupled_mach_limit, density_ratio,
                           jump_decoupled, jump_entropy, jump_source, mach_from_density_ratio, rh_3shock)

G = 5 / 3


def test_rh_reference_state():
    left, sigma = rh_3shock(HeavyState(1.0, 0.2, 1.0), 1.1832, G)
    assert left.rho_h == pytest.approx(1.2727, abs=5e-5)
    assert left.u == pytest.approx(0.5273, abs=5e-5)
    assert left.p == pytest.approx(1.5, abs=5e-5)
    assert sigma == pytest.approx(1.7275, abs=5e-5)


def test_rh_solar_state():
    m = mach_from_density_ratio(1.6962, G)
    assert m * m == pytest.approx(2.2087, abs=1e-4)
    left, _ = rh_3shock(HeavyState(1.0, 0.07, 0.5974), m, G)
    assert left.rho_h == pytest.approx(1.6962, rel=1e-12)
    assert left.u == pytest.approx(0.6787, abs=5e-4)
    assert left.p == pytest.approx(1.5, abs=5e-3)


def test_rh_sonic_identity():
    right = HeavyState(1.3, 0.1, 0.7)
    left, sigma = rh_3shock(right, 1.0, G)
    assert left.rho_h == pytest.approx(right.rho_h)
    assert left.p == pytest.approx(right.p)
    assert sigma == pytest.approx(0.1 + math.sqrt(G * 0.7 / 1.3))


def test_rh_rejects_subsonic():
    with pytest.raises(DomainError):
        rh_3shock(HeavyState(1.0, 0.0, 1.0), 0.9, G)


def _oracle_decoupled(m, g):
    m2 = m * m
    den = (1 - g) * m2 + 2 * g
    return (g + 1) * m2 / den, ((g - 1) * m2 + 2) / den


def test_decoupled_reference_values():
    r = jump_decoupled(1.1832, G)
    assert r.pe_ratio == pytest.approx(1.5556, abs=1.5e-4)
    assert r.te_ratio == pytest.approx(1.2222, abs=5e-5)
    assert r.rhoe_ratio == pytest.approx(1.2727, abs=5e-5)
    pe, te = _oracle_decoupled(1.1832, G)
    assert r.pe_ratio == pytest.approx(pe, rel=1e-14)
    assert r.te_ratio == pytest.approx(te, rel=1e-14)


def test_decoupled_solar_values():
    m = mach_from_density_ratio(1.6962, G)
    r = jump_decoupled(m, G)
    assert r.pe_ratio == pytest.approx(0.9454 / 0.2987, rel=2e-3)
    assert r.rhoe_ratio == pytest.approx(9.23e-4 / 5.44e-4, rel=2e-3)


@pytest.mark.parametrize("fn", [jump_decoupled, jump_entropy, jump_source])
def test_unit_mach_no_jump(fn):
    r = fn(1.0, G)
    assert (r.pe_ratio, r.te_ratio, r.rhoe_ratio) == pytest.approx((1.0, 1.0, 1.0))


def test_decoupled_singularity_exact():
    lim = decoupled_mach_limit(G)
    assert lim == pytest.approx(math.sqrt(5.0))
    jump_decoupled(np.nextafter(lim, 0.0), G)
    with pytest.raises(DomainError):
        jump_decoupled(lim, G)
    with pytest.raises(DomainError):
        jump_decoupled(3.0, G)


def test_entropy_values():
    r = jump_entropy(1.1832, G)
    rho = density_ratio(1.1832, G)
    # isentropic electrons: pe ratio = (rho ratio)^gamma
    assert r.pe_ratio == pytest.approx(rho**G, rel=1e-13)
    assert r.pe_ratio == pytest.approx(1.4947, abs=5e-4)
    assert r.te_ratio == pytest.approx(1.1744, abs=5e-4)
    big = jump_entropy(1e6, G)
    assert big.rhoe_ratio == pytest.approx(4.0, rel=1e-9)
    assert big.pe_ratio == pytest.approx(4.0 ** G, rel=1e-9)


def test_source_values():
    r = jump_source(1.1832, G)
    assert r.pe_ratio == pytest.approx(1.2727, abs=5e-5)
    assert r.te_ratio == 1.0
    assert jump_source(2.0, G).pe_ratio == pytest.approx(10.667 / 4.667, abs=1e-3)


@pytest.mark.parametrize("m", np.linspace(1.001, 2.2, 15))
def test_ratio_identity_and_ordering(m):
    models = [jump_decoupled(m, G), jump_entropy(m, G), jump_source(m, G)]
    for r in models:
        assert r.pe_ratio == pytest.approx(r.te_ratio * r.rhoe_ratio, rel=1e-14)
    assert models[0].te_ratio > models[1].te_ratio > models[2].te_ratio


def test_models_agree_near_unit_mach():
    d = [abs(jump_decoupled(1 + e, G).te_ratio - jump_entropy(1 + e, G).te_ratio) for e in (1e-1, 1e-2, 1e-3)]
    assert d[0] > d[1] > d[2]
    assert d[2] < 1e-5


def test_char_lengths():
    for D, expected in ((0.1, 0.3058), (1e-3, 3.058e-3)):
        cl = char_lengths(GasParams(G, D, 1e-3), 0.01, 0.327)
        assert cl.l_d == pytest.approx(expected, rel=2e-4)
    cl = char_lengths(GasParams(G, 0.1, 1e-3), 0.01, 0.327)
    assert cl.kappa_r == pytest.approx(0.04)
    assert cl.l_t == pytest.approx(0.1223, abs=5e-5)
    with pytest.raises(DomainError):
        char_lengths(GasParams(G, 0.1, 1e-3), 0.01, 0.0)


def test_build_wave_states_models():
    rh, re = HeavyState(1.0, 0.2, 1.0), ElectronState(0.01, 0.1)
    for model, fn in (("decoupled", jump_decoupled), ("entropy", jump_entropy), ("source", jump_source)):
        st = build_wave_states(rh, re, 1.1832, G, model)
        assert st.left_electron.pe / re.pe == pytest.approx(fn(1.1832, G).pe_ratio)
        assert st.left_electron.rho_e / re.rho_e == pytest.approx(st.left_heavy.rho_h / rh.rho_h)
