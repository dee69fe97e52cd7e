"""``verify <suite>``: run a verification suite and write a JSON or CSV report.

Exit status is 0 when every check passes, 1 when any check fails and 2 on
usage errors (argparse's own convention).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from .geometry import Grid
from .report import RunReport, emit_report
from .suites import SUITES, SuiteConfig, run_suite

OUTPUT_DIR_ENV = "POLARSPINOR_OUTPUT_DIR"


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers, e.g. 0.2,4") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description="Polar-form spinor verification suites.")
    p.add_argument("suite", choices=[*SUITES, "all"])
    p.add_argument("--id", type=int, choices=range(1, 8), metavar="{1..7}", help="solution id (default: all applicable)")
    p.add_argument("--m", type=float, default=1.0, help="mass")
    p.add_argument("--eps", type=float, default=0.5, help="Example-1 constant, 0 < eps < m")
    p.add_argument("--E", type=float, default=1.3, help="energy of solution 7, E > m")
    p.add_argument("--k", type=float, default=0.0, help="Example-2 constant")
    p.add_argument("--nr", type=int)
    p.add_argument("--ntheta", type=int)
    p.add_argument("--r-range", type=_range)
    p.add_argument("--theta-range", type=_range)
    p.add_argument("--deriv", choices=("analytic", "fd", "both"), default="both")
    p.add_argument("--h", type=float, default=1e-3, help="finite-difference step")
    p.add_argument("--tol", type=float, help="override every residual tolerance of the suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, help="random draws (identities: 1000, flatness: 20)")
    p.add_argument("--output", type=Path, help=f"report path (default: ${OUTPUT_DIR_ENV}/verify-<suite>.<fmt>, else stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def _grid(args, parser) -> Grid | None:
    given = [args.nr, args.ntheta, args.r_range, args.theta_range]
    if all(v is None for v in given):
        return None
    nr, nt = args.nr or 32, args.ntheta or 32
    if nr < 4 or nt < 4:
        parser.error("--nr and --ntheta must be at least 4")
    try:
        return Grid(nr, nt, args.r_range or (0.2, 4.0), args.theta_range or (0.3, np.pi - 0.3))
    except ValueError as exc:
        parser.error(str(exc))


def config_from_args(args, parser) -> SuiteConfig:
    if args.h <= 0:
        parser.error("--h must be positive")
    if args.tol is not None and args.tol < 0:
        parser.error("--tol must be non-negative")
    if args.trials is not None and args.trials < 1:
        parser.error("--trials must be positive")
    cfg = SuiteConfig(
        id=args.id, m=args.m, eps=args.eps, E=args.E, k=args.k, grid=_grid(args, parser),
        deriv=args.deriv, h=args.h, tol=args.tol, seed=args.seed, trials=args.trials,
    )
    if args.suite in ("solution", "transport", "consistency", "dirac", "all"):
        try:
            cfg.specs()
        except ValueError as exc:
            parser.error(str(exc))
    elif args.m < 0:
        parser.error("m must be non-negative")
    return cfg


def _params(args) -> dict:
    return {k: getattr(args, k) for k in ("id", "m", "eps", "E", "k", "deriv", "h", "tol", "trials", "format")}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args, parser)

    start = time.perf_counter()
    checks = run_suite(args.suite, cfg)
    report = RunReport(
        command=args.suite,
        params=_params(args),
        grid=cfg.grid.as_dict() if cfg.grid is not None else None,
        seed=args.seed,
        checks=checks,
        runtime_ms=(time.perf_counter() - start) * 1e3,
    )

    path = args.output
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = Path(os.environ[OUTPUT_DIR_ENV]) / f"verify-{args.suite}.{args.format}"
    try:
        text = emit_report(report, args.format, path)
    except OSError as exc:
        print(f"verify: cannot write report: {exc}", file=sys.stderr)
        return 2
    if path is None:
        sys.stdout.write(text)
    else:
        failed = [c.name for c in report.sorted_checks() if not c.passed]
        status = "PASS" if report.passed else f"FAIL ({len(failed)} checks: {', '.join(failed[:5])})"
        print(f"{args.suite}: {status}; {len(report.checks)} checks, report in {path}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
