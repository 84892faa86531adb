"""Regenerate the golden CSVs from the solver package.

Run from the repository root:  python3 plotkit/testdata/regenerate.py
"""

import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "src"))

from stsolve import parse_config, run  # noqa: E402
from stsolve.runio import emit_series, emit_snapshot  # noqa: E402

HERE = os.path.dirname(os.path.abspath(__file__))


def main() -> None:
    blowup = run(
        parse_config(
            """
problem = semilinear_heat
scheme = rkl2
p = 3
n_intervals = 256
threshold = 1e9
"""
        )
    )
    emit_series(blowup.series, os.path.join(HERE, "blowup_series.csv"))
    late = [s for s in blowup.snapshots if s.values.max() >= 1e8][:3]
    for i, snap in enumerate(late):
        emit_snapshot(snap, os.path.join(HERE, f"blowup_snapshot_{i}.csv"))

    pinch = run(
        parse_config(
            """
problem = surface_diffusion
scheme = rkl2
n_intervals = 128
dt0 = 5e-4
threshold = 2e-4
"""
        )
    )
    emit_series(pinch.series, os.path.join(HERE, "pinch_series.csv"))
    emit_snapshot(pinch.snapshots[-1], os.path.join(HERE, "pinch_snapshot.csv"))
    print("golden CSVs written to", HERE)


if __name__ == "__main__":
    main()
