"""Snapshot CSV and diagnostics JSONL writers.

Floats are written with 17 significant digits so that reading a file back
reproduces every value bit for bit.
"""
from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .diagnostics import DiagnosticsSeries
from .solver import Grid1D, State

SNAPSHOT_HEADER = "t,x,v,u,s"


def _num(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, str):
        return json.dumps(x)
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def format_record(record: dict) -> str:
    return "{" + ", ".join(f"{json.dumps(k)}: {_num(v)}" for k, v in record.items()) + "}"


def write_series(series: DiagnosticsSeries, path) -> None:
    """Write one JSON object per line; overwrites ``path``."""
    path = Path(path)
    try:
        with path.open("w") as fh:
            for rec in series.records:
                fh.write(format_record(rec) + "\n")
    except OSError as err:
        raise OSError(f"cannot write diagnostics series to {path}: {err.strerror}") from err


def read_series(path) -> list[dict]:
    with Path(path).open() as fh:
        return [json.loads(line) for line in fh if line.strip()]


def write_snapshots(snapshots: Sequence[tuple[float, State]], grid: Grid1D, path, config_hash: str) -> None:
    """One row per cell per snapshot, preceded by a ``# config_hash`` comment line."""
    path = Path(path)
    x = grid.x
    try:
        with path.open("w") as fh:
            fh.write(f"# config_hash={config_hash}\n{SNAPSHOT_HEADER}\n")
            for t, st in snapshots:
                cols = np.column_stack([np.full_like(x, t), x, st.v, st.u, st.s])
                np.savetxt(fh, cols, fmt="%.17g", delimiter=",")
    except OSError as err:
        raise OSError(f"cannot write snapshots to {path}: {err.strerror}") from err


def read_snapshots(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", comments="#", skiprows=2, ndmin=2)


def write_table(rows: Iterable[dict], path, config_hash: str) -> None:
    """Small CSV table of heterogeneous rows (floats at 17 digits)."""
    rows = list(rows)
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"# config_hash={config_hash}\n")
        if not rows:
            return
        keys = list(rows[0])
        fh.write(",".join(keys) + "\n")
        for r in rows:
            fh.write(",".join(_cell(r[k]) for k in keys) + "\n")


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "PASS" if v else "FAIL"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return _num(v)
