import json

import pytest

from twotemp.cli import main


def test_jump(capsys):
    assert main(["jump", "--mach", "1.1832", "--gamma", "1.6667"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "closure,pe_ratio,te_ratio,rhoe_ratio"
    assert [line.split(",")[0] for line in out[1:]] == ["decoupled", "entropy", "source"]


def test_jump_json(capsys):
    assert main(["jump", "--mach", "2.5", "--json"]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["decoupled"] is None
    assert "undefined" in captured.err


def test_wave_sample(capsys):
    assert main(["wave", "sample", "--case", "caseWD", "--points", "5"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 6


@pytest.mark.parametrize("argv", [["run", "--case", "nope"], ["run", "--scheme", "Z"],
                                  ["wave", "sample", "--case", "nope"]])
def test_usage_errors(argv, capsys):
    assert main(argv) != 0
    assert "error" in capsys.readouterr().err


def test_missing_subcommand():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code != 0


def test_run_writes_outputs(tmp_path, capsys):
    argv = ["run", "--case", "caseWD", "--scheme", "A", "--n-cells", "200", "--t-final", "0.2",
            "--output-times", "0.1"]
    for k in ("a", "b"):
        assert main(argv + ["--out", str(tmp_path / k)]) == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == ["run_caseWD_A.json", "run_caseWD_A_manifest.json", "run_caseWD_A_t0.1.csv",
                     "run_caseWD_A_t0.2.csv"]
    for name in files[1:]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    manifest = json.loads((tmp_path / "a" / "run_caseWD_A_manifest.json").read_text())
    assert manifest["scheme"] == "A" and "wall_time" not in manifest
    sidecar = json.loads((tmp_path / "a" / "run_caseWD_A.json").read_text())
    assert sidecar["metadata"]["wall_time"] >= 0


def test_run_config_file(tmp_path, capsys):
    from twotemp.cases import dump_case, get_case
    path = tmp_path / "case.json"
    dump_case(get_case("caseHD").with_grid(100, name="mine"), path)
    assert main(["run", "--config", str(path), "--t-final", "0.05", "--scheme", "B"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# t0.05\n") is False and out.startswith("x,u1,u2,Te,pe")


def test_bad_config_file(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "absent.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["run", "--config", str(bad)]) == 1


def test_sweeps(capsys):
    assert main(["sweep", "d", "--points", "2", "--n-cells", "100", "--d-min", "0.05"]) == 0
    assert capsys.readouterr().out.startswith("variant,N,D,nodes_per_LD")
    assert main(["sweep", "courant", "--case", "caseHD", "--n-cells", "100", "--courants", "0.2,0.4"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3
    assert main(["coupled", "sweep", "--mach-min", "1", "--mach-max", "1", "--points", "1"]) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith("1.0,1.0,1.0")


def test_verify_subset(capsys, tmp_path):
    assert main(["verify", "1", "2", "--out", str(tmp_path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2 and all(line.startswith("[PASS]") for line in lines)
    assert json.loads((tmp_path / "verify.json").read_text())["passed"]
