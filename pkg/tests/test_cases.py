import json
import math

import pytest

from twotemp.cases import (PHOTOSPHERE, CaseError, builtin_cases, case_from_dict, dump_case, get_case,
                           load_case, solar_case)


def test_builtin_cases_validate():
    names = [c.name for c in builtin_cases()]
    assert {"caseHD", "caseWD", "solar", "solar5000"} <= set(names)
    assert sum(n.startswith("dsweep-") for n in names) == 9


def test_nodes_per_ld():
    assert get_case("caseHD").nodes_per_ld == pytest.approx(61.1, rel=2e-3)
    assert get_case("caseWD").nodes_per_ld == pytest.approx(0.611, rel=2e-3)


def test_solar_case():
    c = solar_case(1000)
    assert c.reference["l_d_over_l0"] == 1.0 and c.reference["l_t_over_l0"] == 11309.0
    st = c.states()
    assert st.left_heavy.rho_h == pytest.approx(1.6962, rel=1e-12)
    assert c.params.kappa(c.right_electron.rho_e) == pytest.approx(121970.96)
    notes = c.check()
    assert any("l_d_over_l0" in n for n in notes)
    lengths = c.lengths()
    assert lengths.l_t / lengths.l_d == pytest.approx(11309, rel=1e-3)


def test_unknown_case():
    with pytest.raises(CaseError):
        get_case("nope")


def test_round_trip(tmp_path):
    for c in (get_case("caseHD"), solar_case(5000)):
        path = tmp_path / f"{c.name}.json"
        dump_case(c, path)
        assert load_case(path) == c


def _solar_si():
    ref = PHOTOSPHERE
    v0 = ref.v0
    return {
        "name": "solar-si", "units": "si", "gamma": 5 / 3,
        "D": 10.7853 * ref.l0 * v0, "kappa_r": 121970.96 * ref.l0 * v0,
        "right_heavy": {"rho_h": ref.rho0, "u": 0.07 * v0, "p": 0.5974 * ref.p0},
        "right_electron": {"rho_e": 5.44e-4 * ref.rho0, "pe": 0.2987 * ref.p0},
        "left_rho_h": 1.6962 * ref.rho0, "n_cells": 1000, "length": 2e5 * ref.l0, "t_final": 30000 * ref.time,
    }


def test_si_reference_velocity():
    assert PHOTOSPHERE.v0 == pytest.approx(651.8, abs=0.1)


def test_si_case_matches_nondimensional():
    c = case_from_dict(_solar_si())
    s = solar_case(1000)
    assert c.params.D == pytest.approx(s.params.D, rel=1e-12)
    assert c.params.lam == pytest.approx(s.params.lam, rel=1e-12)
    assert c.length == pytest.approx(2e5, rel=1e-12)
    assert c.t_final == pytest.approx(30000, rel=1e-12)
    assert c.mach_r == pytest.approx(s.mach_r, rel=1e-12)
    assert c.right_heavy.p == pytest.approx(0.5974, rel=1e-12)


@pytest.mark.parametrize("mutate", [
    lambda d: d["right_heavy"].update(rho_h=-1.0),
    lambda d: d.pop("D"),
    lambda d: d.update(units="cgs"),
    lambda d: d.pop("kappa_r"),
    lambda d: d.pop("left_rho_h"),
    lambda d: d.update(n_cells=1),
])
def test_invalid_files(mutate):
    d = _solar_si()
    mutate(d)
    with pytest.raises(CaseError):
        case_from_dict(d)


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(CaseError):
        load_case(p)
    p.write_text("[1, 2]")
    with pytest.raises(CaseError):
        load_case(p)


def test_inconsistent_reference_rejected():
    d = get_case("caseHD").to_dict()
    d["reference"]["left_pe"] = 0.2
    with pytest.raises(CaseError):
        case_from_dict(d)


def test_beyond_decoupled_limit_warns():
    d = get_case("caseHD").to_dict()
    d["mach_r"] = 2.5
    d["reference"] = {}
    with pytest.warns(UserWarning):
        c = case_from_dict(d)
    assert c.mach_r == 2.5
