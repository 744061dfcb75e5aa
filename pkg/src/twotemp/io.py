"""Deterministic CSV / JSON output and run manifests.

Floats are written with ``repr`` (shortest round-trip form) so that reruns
are byte-identical.
"""
from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .analytic import AnalyticProfile
from .fv import FieldState

TRAJECTORY_COLUMNS = ("x", "u1", "u2", "Te", "pe", "exact_pe", "exact_Te", "rel_err")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(value)


def csv_text(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        if isinstance(row, dict):
            row = [row[c] for c in columns]
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def trajectory_rows(field: FieldState, profile: AnalyticProfile, x: np.ndarray):
    g = profile.states.gamma
    pe = field.pressure(g)
    te = field.temperature(g)
    pe_ex, te_ex = profile.sample(x, field.time)
    rel = (pe - pe_ex) / pe_ex
    return [tuple(r) for r in zip(x, field.u1, field.u2, te, pe, pe_ex, te_ex, rel)]


def trajectory_csv(field: FieldState, profile: AnalyticProfile, x: np.ndarray) -> str:
    return csv_text(TRAJECTORY_COLUMNS, trajectory_rows(field, profile, x))


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isnan(v) or math.isinf(v) else v
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def json_text(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def write_text(path, text: str) -> str:
    """Write ``text`` and return its sha256."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text)
    return sha256_text(text)


def write_outputs(out_dir, stem: str, files: dict[str, str], metadata: dict) -> dict:
    """Write named payloads plus a manifest with checksums; returns the manifest.

    ``files`` maps a suffix (e.g. ``"t1.csv"``) to its text. The manifest
    excludes wall-clock data so that it is reproducible itself.
    """
    out = Path(out_dir)
    entries = {}
    for suffix, text in files.items():
        name = f"{stem}_{suffix}"
        entries[name] = write_text(out / name, text)
    manifest = dict(metadata)
    manifest["outputs"] = entries
    write_text(out / f"{stem}_manifest.json", json_text(manifest))
    return manifest
