"""Command-line interface.

Subcommands: analyze, random-scan, case-study, verify.  Exit codes:
0 success, 1 numeric or internal failure, 2 input validation failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .case_study import grid_scan
from .ensembles import nonlocality_scan
from .linalg import ValidationError
from .optimizer import InternalConsistencyError, OptimizerConfig
from .stateio import (
    analyze_state,
    parse_state,
    report_to_csv,
    report_to_json,
    grid_to_csv,
    scan_to_csv,
)
from .verify import run_verification

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_VALIDATION = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_threads() -> int:
    env = os.environ.get("CHSH_MAX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads (default: CHSH_MAX_THREADS or machine parallelism); "
        "affects wall time only, never results",
    )
    sub.add_argument("--grid", type=int, default=30, help="grid points per Euler angle")
    sub.add_argument(
        "--refine-starts", type=int, default=10, help="grid candidates to refine"
    )
    sub.add_argument(
        "--simplex-tol", type=float, default=1e-9, help="simplex convergence spread"
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="chshmax", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser(
        "analyze", help="maximal CHSH violation of one state file"
    )
    analyze.add_argument("state", help="path to a JSON state file")
    analyze.add_argument(
        "--seesaw-check",
        action="store_true",
        help="also run the alternating-ascent cross check",
    )
    analyze.add_argument("--seed", type=int, default=0, help="seed for --seesaw-check")
    fmt = analyze.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--csv", action="store_true", help="CSV output")
    analyze.add_argument(
        "--no-timing", action="store_true", help="omit timing fields from the report"
    )
    _add_common(analyze)

    scan = commands.add_parser(
        "random-scan", help="nonlocality statistics over random Bures states"
    )
    scan.add_argument("--d", type=int, required=True, help="qudit dimension")
    scan.add_argument("--samples", type=int, required=True, help="number of states")
    scan.add_argument("--seed", type=int, default=0)
    scan.add_argument("--out", help="write CSV here instead of stdout")
    _add_common(scan)

    case = commands.add_parser(
        "case-study", help="qubit-qutrit family grid: negativity and CHSH maximum"
    )
    case.add_argument("--resolution", type=int, default=101, help="points per axis")
    case.add_argument("--out", help="write CSV here instead of stdout")
    _add_common(case)

    verify = commands.add_parser(
        "verify", help="run the cross-validation batteries"
    )
    verify.add_argument("--trials", type=int, default=100)
    verify.add_argument("--seed", type=int, default=0)
    _add_common(verify)

    return parser


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(
        grid_points=args.grid,
        refine_starts=args.refine_starts,
        simplex_tol=args.simplex_tol,
    )


def _emit(text: str, out: str | None, stdout) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def run_cli(argv, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    threads = max(1, args.threads) if args.threads else _default_threads()
    config = _config(args)
    try:
        if args.command == "analyze":
            try:
                with open(args.state, "rb") as fh:
                    text = fh.read()
            except OSError as exc:
                print(f"chshmax: cannot read {args.state}: {exc}", file=stderr)
                return EXIT_VALIDATION
            state = parse_state(text)
            report = analyze_state(
                state, config, seesaw_check=args.seesaw_check, seed=args.seed
            )
            if args.csv:
                stdout.write(report_to_csv(report))
            else:
                stdout.write(report_to_json(report, with_timing=not args.no_timing))
            return EXIT_OK

        if args.command == "random-scan":
            if args.d < 2 or args.samples < 1:
                print("chshmax: --d must be >= 2 and --samples >= 1", file=stderr)
                return EXIT_VALIDATION
            stats = nonlocality_scan(
                args.d, args.samples, args.seed, config, threads=threads
            )
            _emit(scan_to_csv(stats), args.out, stdout)
            return EXIT_OK

        if args.command == "case-study":
            rows = grid_scan(args.resolution, config, threads=threads)
            _emit(grid_to_csv(rows), args.out, stdout)
            return EXIT_OK

        if args.command == "verify":
            results = run_verification(args.trials, args.seed, config, threads)
            all_ok = True
            for r in results:
                status = "PASS" if r.passed else "FAIL"
                stdout.write(f"{r.name}: {status} ({r.detail})\n")
                all_ok &= r.passed
            return EXIT_OK if all_ok else EXIT_NUMERIC

        raise AssertionError(f"unhandled command {args.command!r}")
    except ValidationError as exc:
        print(f"chshmax: validation error: {exc}", file=stderr)
        return EXIT_VALIDATION
    except InternalConsistencyError as exc:
        print(f"chshmax: internal consistency error: {exc}", file=stderr)
        return EXIT_NUMERIC
    except (ValueError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"chshmax: numeric error: {exc}", file=stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
