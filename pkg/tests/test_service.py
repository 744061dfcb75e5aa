import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from twotemp.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health_and_cases(client):
    assert client.get("/health").json() == {"status": "ok"}
    cases = {c["name"]: c for c in client.get("/cases").json()}
    assert cases["caseHD"]["nodes_per_ld"] == pytest.approx(61.1, rel=2e-3)
    assert cases["solar"]["notes"]


def test_jump(client):
    out = client.post("/jump", json={"mach": 1.1832}).json()
    assert out["decoupled"]["pe_ratio"] == pytest.approx(1.5556, abs=2e-4)
    assert out["source"]["te_ratio"] == 1.0
    beyond = client.post("/jump", json={"mach": 3.0}).json()
    assert beyond["decoupled"] is None and "undefined" in beyond["decoupled_error"]
    assert client.post("/jump", json={"mach": 0.5}).status_code == 422


def test_wave_sample(client):
    out = client.post("/wave/sample", json={"case": "caseHD", "t": 0.0, "x": [2.0, 9.9]}).json()
    lines = out["csv"].splitlines()
    assert lines[0] == "x,xi,pe,Te,rho_e,ee"
    assert float(lines[1].split(",")[2]) == pytest.approx(0.15555, abs=1e-4)
    assert client.post("/wave/sample", json={"case": "missing"}).status_code == 404


def test_run_and_errors(client):
    out = client.post("/run", json={"case": "caseHD", "n_cells": 200, "t_final": 0.1, "scheme": "C",
                                    "output_times": [0.05]}).json()
    assert list(out["csv"]) == ["t0.05", "t0.1"]
    assert out["metadata"]["scheme"] == "C"
    assert client.post("/run", json={"scheme": "X"}).status_code == 422
    assert client.post("/run", json={"flux": "hll"}).status_code == 422
    assert client.post("/run", json={"case": "caseHD", "n_cells": 200, "t_final": 9.0}).status_code == 422


def test_run_with_case_config(client):
    cfg = client.get("/cases").json()[0]["config"]
    cfg.update(name="custom", n_cells=100, t_final=0.05)
    cfg["reference"].pop("nodes_per_ld")
    out = client.post("/run", json={"case_config": cfg}).json()
    assert out["metadata"]["case"] == "custom" and out["metadata"]["n_cells"] == 100
    cfg["right_heavy"]["rho_h"] = -1.0
    assert client.post("/run", json={"case_config": cfg}).status_code == 422


def test_sweeps(client):
    d = client.post("/sweep/d", json={"points": 2, "n_cells": 100, "d_min": 0.05, "d_max": 0.1}).json()
    assert len(d["rows"]) == 2 and d["csv"].startswith("variant,N,D")
    assert "error" in d["slopes"]["standard"]
    assert client.post("/sweep/d", json={"d_min": 0.1, "d_max": 0.01}).status_code == 422
    assert client.post("/sweep/d", json={"variants": ["other"]}).status_code == 422
    c = client.post("/sweep/courant", json={"case": "caseHD", "n_cells": 100, "courants": [0.4, 0.2]}).json()
    assert [r["courant"] for r in c["rows"]] == [0.2, 0.4]
    assert client.post("/sweep/courant", json={"courants": [1.5]}).status_code == 422
    m = client.post("/coupled/sweep", json={"mach_min": 1.0, "mach_max": 1.0, "points": 1}).json()
    assert m["rows"][0]["coupled_pe"] == 1.0


def test_verify_subset(client):
    out = client.post("/verify", json={"criteria": [1, 3]}).json()
    assert out["passed"]
    assert [r["number"] for r in out["results"]] == [1, 3]
    assert client.post("/verify", json={"criteria": [42]}).status_code == 422
