import json
import math

import numpy as np

from twotemp.cases import get_case
from twotemp.fv import SchemeConfig
from twotemp.io import TRAJECTORY_COLUMNS, csv_text, fmt, json_text, sha256_text, write_outputs
from twotemp.sweeps import run_case


def test_fmt_round_trips():
    for v in (0.1, 1 / 3, 1e-300, -2.5e17, np.float64(0.30000000000000004)):
        assert float(fmt(v)) == float(v)
    assert fmt(3) == "3" and fmt(np.int64(4)) == "4"
    assert fmt(True) == "true" and fmt(math.nan) == "nan"


def test_csv_text_rows_and_dicts():
    text = csv_text(("a", "b"), [(1, 0.5), {"a": 2, "b": 0.25}])
    assert text == "a,b\n1,0.5\n2,0.25\n"


def test_json_text_handles_numpy():
    out = json.loads(json_text({"x": np.float64(1.5), "y": np.arange(2), "z": math.inf, 3: np.bool_(True)}))
    assert out == {"x": 1.5, "y": [0, 1], "z": None, "3": True}


def test_run_output_is_deterministic(tmp_path):
    case = get_case("caseHD").with_grid(200)
    texts = []
    for k in range(2):
        cr = run_case(case, SchemeConfig(scheme="B"), t_final=0.1)
        texts.append(cr.csv())
        meta = {kk: v for kk, v in cr.metadata.items() if kk != "wall_time"}
        write_outputs(tmp_path / str(k), "run", {"final.csv": cr.csv()}, meta)
    assert texts[0] == texts[1]
    assert texts[0].splitlines()[0] == ",".join(TRAJECTORY_COLUMNS)
    m0 = (tmp_path / "0" / "run_manifest.json").read_text()
    m1 = (tmp_path / "1" / "run_manifest.json").read_text()
    assert m0 == m1
    assert json.loads(m0)["outputs"]["run_final.csv"] == sha256_text(texts[0])
