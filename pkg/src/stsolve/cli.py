"""Command-line entry point.

Subcommands: run, verify-monotone, convergence, compare-baseline.
Exit codes: 0 success, 1 usage error, 2 run-level failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import monotone
from .amr import run
from .config import parse_config
from .errors import SolverError
from .grid import DIRICHLET, Field, uniform_grid
from .integrators import FAMILIES, SchemeSpec, stability_limit, superstep
from .operators import HeatLaplacian
from .runio import write_run_outputs

_SUCCESS_REASONS = ("threshold_reached", "blow_up_reached", "pinch_off_reached")


def _cmd_run(args) -> int:
    with open(args.config) as fh:
        config = parse_config(fh.read())
    if args.threshold is not None:
        config.threshold = args.threshold
    if args.snapshot_decades is not None:
        config.snapshots_per_decade = args.snapshot_decades
    out_dir = args.out or config.out_dir or "run_output"
    result = run(config)
    paths = write_run_outputs(result, out_dir)
    print(
        f"{config.scheme} {config.problem}: {result.report.termination_reason} "
        f"at t={result.report.final_time:.6g} value={result.report.final_value:.6g} "
        f"steps={result.report.steps} refinements={result.report.refinement_count} "
        f"wall={result.report.wall_time_s:.2f}s"
    )
    print(f"report: {paths['report']}")
    if result.report.termination_reason not in _SUCCESS_REASONS:
        print(f"run failed: {result.report.termination_reason} {result.report.notes}",
              file=sys.stderr)
        return 2
    return 0


def _verify_one(task):
    family, s, samples = task
    cert = monotone.verify_monotone(family, s, [Fraction(x) for x in samples])
    return cert.to_dict()


def _cmd_verify_monotone(args) -> int:
    families = list(FAMILIES) if args.family == "all" else [args.family]
    samples = [Fraction(tok) for tok in args.samples.split(",")]
    tasks = [(fam, s, tuple(str(x) for x in samples))
             for fam in families for s in range(1, args.smax + 1)]
    workers = max(1, int(os.environ.get("STS_THREADS", "1")))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            certs = list(pool.map(_verify_one, tasks, chunksize=8))
    else:
        certs = [_verify_one(t) for t in tasks]
    all_ok = all(c["ok"] for c in certs)
    payload = {"x_samples": [str(x) for x in samples], "all_ok": all_ok, "certificates": certs}
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"certificate: {args.out} (all_ok={all_ok})")
    else:
        print(text)
    return 0 if all_ok else 2


def _cmd_convergence(args) -> int:
    # manufactured heat solution: sin(pi x) is an exact eigenvector of the
    # discrete Dirichlet Laplacian, so the semidiscrete solution is known
    n = 64
    grid = uniform_grid(1.0, n, DIRICHLET)
    x = grid.nodes
    u0 = np.sin(np.pi * x)
    h = 2.0 / n
    lam_h = -(4.0 / (h * h)) * np.sin(np.pi * h / 2.0) ** 2
    spec = SchemeSpec(args.family, args.s)
    t_end = 0.1
    dt0 = 0.9 * stability_limit(spec, 4.0 / (h * h))
    rows = []
    prev_err = None
    for k in range(args.halvings + 1):
        dt = dt0 / 2**k
        steps = int(math.ceil(t_end / dt))
        dt = t_end / steps
        f = Field(grid=grid, values=u0, time=0.0)
        for _ in range(steps):
            f = superstep(spec, f, HeatLaplacian(1.0), dt)
        exact = math.exp(lam_h * t_end) * u0
        err = float(np.abs(f.values - exact).max())
        order = math.log2(prev_err / err) if prev_err else float("nan")
        rows.append((dt, err, order))
        prev_err = err
    print(f"# family={args.family} s={args.s} manufactured heat solution")
    print(f"{'dt':>14} {'max_error':>14} {'order':>8}")
    for dt, err, order in rows:
        print(f"{dt:14.6e} {err:14.6e} {order:8.3f}")
    return 0


def _cmd_compare_baseline(args) -> int:
    with open(args.config) as fh:
        config = parse_config(fh.read())
    if config.scheme not in FAMILIES:
        print("compare-baseline expects an STS scheme in the config", file=sys.stderr)
        return 1
    baseline = "semi_implicit" if config.problem == "semilinear_heat" else "backward_euler"

    sts_result = run(config)
    base_result = run(dataclasses.replace(config, scheme=baseline))

    sts_v = sts_result.report.final_value
    base_v = base_result.report.final_value
    payload = {
        "problem": config.problem,
        "sts_scheme": config.scheme,
        "baseline_scheme": baseline,
        "sts_wall_s": sts_result.report.wall_time_s,
        "baseline_wall_s": base_result.report.wall_time_s,
        "wall_ratio_baseline_over_sts": base_result.report.wall_time_s
        / max(sts_result.report.wall_time_s, 1e-12),
        "sts_final_value": sts_v,
        "baseline_final_value": base_v,
        "final_value_rel_diff": abs(sts_v - base_v) / max(abs(sts_v), abs(base_v)),
        "sts_termination": sts_result.report.termination_reason,
        "baseline_termination": base_result.report.termination_reason,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "compare.json")
        with open(path, "w") as fh:
            fh.write(text + "\n")
        print(f"comparison: {path}")
    print(text)
    ok = (
        sts_result.report.termination_reason in _SUCCESS_REASONS
        and base_result.report.termination_reason in _SUCCESS_REASONS
    )
    return 0 if ok else 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stsolve")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a configured run")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--threshold", type=float, default=None)
    p_run.add_argument("--snapshot-decades", type=int, default=None,
                       dest="snapshot_decades")
    p_run.set_defaults(func=_cmd_run)

    p_ver = sub.add_parser("verify-monotone", help="exact monotonicity certificates")
    p_ver.add_argument("--family", choices=FAMILIES + ("all",), default="all")
    p_ver.add_argument("--smax", type=int, default=64)
    p_ver.add_argument("--samples", default="1/16,1/8,1/4")
    p_ver.add_argument("--out", default=None)
    p_ver.set_defaults(func=_cmd_verify_monotone)

    p_conv = sub.add_parser("convergence", help="dt-refinement order study")
    p_conv.add_argument("--family", choices=FAMILIES, default="rkl2")
    p_conv.add_argument("--s", type=int, default=7)
    p_conv.add_argument("--halvings", type=int, default=4)
    p_conv.set_defaults(func=_cmd_convergence)

    p_cmp = sub.add_parser("compare-baseline", help="STS vs implicit baseline")
    p_cmp.add_argument("--config", required=True)
    p_cmp.add_argument("--out", default=None)
    p_cmp.set_defaults(func=_cmd_compare_baseline)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
