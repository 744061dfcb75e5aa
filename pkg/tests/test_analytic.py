import math

import numpy as np
import pytest

from twotemp.analytic import AnalyticProfile, compatibility_residual, profile_constants, wave_coefficients
from twotemp.core import DomainError, ElectronState, GasParams, WaveStates
from twotemp.jumps import jump_decoupled

G = 5 / 3
C_R = math.sqrt(G)


def test_coefficients_hd(params_hd):
    c = wave_coefficients(params_hd, ElectronState(0.01, 0.1), C_R, 1.1832)
    assert c.eta_r == pytest.approx(-15.2748, abs=5e-4)
    assert c.r_r == pytest.approx(2.5)
    assert c.delta_plus == pytest.approx(-45.824, abs=5e-3)
    assert c.delta_minus == pytest.approx(-7.637, abs=5e-3)
    # independent: roots of delta^2 - eta (1 + r) delta + eta^2 r / gamma = 0
    roots = np.sort(np.roots([1.0, -c.eta_r * (1 + c.r_r), c.eta_r**2 * c.r_r / G]))
    assert roots == pytest.approx([c.delta_plus, c.delta_minus], rel=1e-12)


def test_coefficients_wd(params_wd):
    c = wave_coefficients(params_wd, ElectronState(0.01, 0.1), C_R, 1.1832)
    assert c.r_r == pytest.approx(0.025)
    assert c.eta_r == pytest.approx(-1527.48, abs=0.05)
    assert c.delta_plus < 0 and c.delta_minus < 0


def test_degenerate_diffusion_rejected():
    with pytest.raises(DomainError):
        wave_coefficients(GasParams(G, 0.0, 1e-3), ElectronState(0.01, 0.1), C_R, 1.2)
    with pytest.raises(DomainError):
        wave_coefficients(GasParams(G, 0.1, 0.0), ElectronState(0.01, 0.1), C_R, 1.2)


def test_constants_hd(case_a_states, params_hd):
    prof = AnalyticProfile.build(case_a_states, params_hd)
    assert prof.k_plus == pytest.approx(0.2223, abs=5e-4)
    assert prof.k_minus == pytest.approx(5.3333, abs=1e-3)


def test_unit_mach_zero_amplitude(params_hd):
    from twotemp.core import HeavyState
    from twotemp.jumps import build_wave_states
    st = build_wave_states(HeavyState(1.0, 0.2, 1.0), ElectronState(0.01, 0.1), 1.0, G)
    prof = AnalyticProfile.build(st, params_hd)
    assert prof.k_plus == pytest.approx(0.0, abs=1e-14)
    assert prof.k_minus == pytest.approx(0.0, abs=1e-14)


def test_profile_value_at_ld(case_a_states, params_hd):
    prof = AnalyticProfile.build(case_a_states, params_hd)
    xi = 0.3058
    pe, _ = prof.sample_xi(np.array([xi]))
    oracle = 0.1 + 0.01 * (prof.k_plus * math.exp(prof.delta_plus * xi) + prof.k_minus * math.exp(prof.delta_minus * xi))
    assert pe[0] == pytest.approx(oracle, rel=1e-14)
    assert pe[0] == pytest.approx(0.10513, abs=1e-4)


def test_profile_limits_and_continuity(case_a_states, params_hd):
    prof = AnalyticProfile.build(case_a_states, params_hd, x0=2.0)
    st = case_a_states
    far = prof.evaluate(2.0 + 50.0, 0.0)
    assert far.pe == pytest.approx(st.right_electron.pe, rel=1e-12)
    at0 = prof.evaluate(2.0, 0.0)
    assert at0.pe == pytest.approx(st.left_electron.pe, rel=1e-14)
    eps = 1e-9
    pe_p, te_p = prof.sample_xi(np.array([eps]))
    assert pe_p[0] == pytest.approx(st.left_electron.pe, rel=1e-7)
    assert te_p[0] == pytest.approx(st.left_electron.Te, rel=1e-7)


def test_profile_monotone(case_a_states, params_hd):
    prof = AnalyticProfile.build(case_a_states, params_hd)
    pe, te = prof.sample_xi(np.linspace(0, 3, 2000))
    assert np.all(np.diff(pe) <= 0) and np.all(np.diff(te) <= 0)


@pytest.mark.parametrize("D", [0.1, 1e-2, 1e-3])
def test_compatibility_conditions(case_a_states, D):
    prof = AnalyticProfile.build(case_a_states, GasParams(G, D, 1e-3))
    res_pe, res_te = compatibility_residual(prof)
    assert abs(res_pe) < 1e-10 and abs(res_te) < 1e-10
    dpe, dte = prof.right_derivatives()
    assert dte == pytest.approx(0.0, abs=1e-12)
    # D [pe'] = pe(0) [u]: oracle from the left state and the velocity jump
    assert D * dpe == pytest.approx(case_a_states.left_electron.pe * case_a_states.velocity_jump, rel=1e-12)


def test_compatibility_detects_broken_left_state(case_a_states, params_hd):
    from dataclasses import replace
    el = case_a_states.left_electron
    bad = replace(case_a_states, left_electron=ElectronState(el.rho_e, el.pe * 1.01))
    res_pe, res_te = compatibility_residual(AnalyticProfile.build(bad, params_hd))
    assert max(abs(res_pe), abs(res_te)) > 1e-4


def test_compatibility_with_rounded_left_state(params_hd):
    from twotemp.core import HeavyState
    st = WaveStates(HeavyState(1.0, 0.2, 1.0), ElectronState(0.01, 0.1), HeavyState(1.274, 0.527, 1.5),
                    ElectronState(0.01274, 0.1556), sigma=1.7275, gamma=G)
    prof = AnalyticProfile.build(st, params_hd)
    res_pe, res_te = compatibility_residual(prof)
    # residuals relative to the size of each side of the conditions
    rel_pe = abs(res_pe) / (st.left_electron.pe * abs(st.velocity_jump))
    rel_te = abs(res_te) / (abs(st.left_electron.Te - st.right_electron.Te) * abs(prof.delta_plus))
    assert 1e-5 < max(rel_pe, rel_te) < 1e-2


def test_far_field_equals_jump_ratios(case_a_states, params_hd):
    prof = AnalyticProfile.build(case_a_states, params_hd)
    r = jump_decoupled(case_a_states.mach_r, G)
    pe0, te0 = prof.sample_xi(np.array([-1.0]))
    pe_inf, te_inf = prof.sample_xi(np.array([100.0]))
    assert pe0[0] / pe_inf[0] == pytest.approx(r.pe_ratio, rel=1e-12)
    assert te0[0] / te_inf[0] == pytest.approx(r.te_ratio, rel=1e-12)
