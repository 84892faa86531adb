"""Bit-stable CSV/JSON emission for runs, series, and certificates.

All floats are written with 17 significant digits, so identical runs yield
byte-identical files.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os

import numpy as np

from .amr import RunReport, RunResult
from .diagnostics import DiagnosticsSeries
from .grid import Field

SERIES_COLUMNS = ("time", "value", "half_width", "dvdt", "cone_slope", "level")


def _fmt(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def emit_snapshot(f: Field, path) -> None:
    """Write one field as CSV with columns x, u."""
    with open(path, "w") as fh:
        fh.write("x,u\n")
        for x, u in zip(f.grid.nodes, f.values):
            fh.write(f"{_fmt(float(x))},{_fmt(float(u))}\n")


def emit_series(series: DiagnosticsSeries, path) -> None:
    """Write the diagnostics series as CSV with the fixed column order."""
    with open(path, "w") as fh:
        fh.write(",".join(SERIES_COLUMNS) + "\n")
        for rec in series.records:
            fh.write(
                f"{_fmt(rec.time)},{_fmt(rec.value)},{_fmt(rec.half_width)},"
                f"{_fmt(rec.dvdt)},{_fmt(rec.cone_slope)},{rec.level}\n"
            )


def read_series_csv(path) -> dict[str, np.ndarray]:
    """Load a series CSV back into column arrays."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    data = np.array([[float(v) for v in row] for row in rows], dtype=np.float64)
    if data.size == 0:
        data = data.reshape(0, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_report(report: RunReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(dataclasses.asdict(report), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_run_outputs(result: RunResult, out_dir) -> dict[str, str]:
    """Write report.json, series.csv, and the snapshot CSVs for one run."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "report": os.path.join(out_dir, "report.json"),
        "series": os.path.join(out_dir, "series.csv"),
    }
    write_report(result.report, paths["report"])
    emit_series(result.series, paths["series"])
    snap_dir = os.path.join(out_dir, "snapshots")
    os.makedirs(snap_dir, exist_ok=True)
    for i, snap in enumerate(result.snapshots):
        emit_snapshot(snap, os.path.join(snap_dir, f"snap_{i:04d}.csv"))
    paths["snapshots"] = snap_dir
    return paths
