"""Command line entry point.

Exit codes: 0 pass, 1 verdict or property failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ._validation import ShapeError, check_dims
from .matrixio import MatrixFileError, dumps_matrix, read_matrix
from .preserver import check_left_mult, oracle_preserves_trace, synth_left_mult_preserver
from .suite import DEFAULT_DIMS, DEFAULT_TRIALS, run_suite
from .superop import DEFAULT_TOL, left_mult

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage already; keep the message on stderr
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _non_negative(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kronpreserve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-left", help="check whether M -> PM preserves tr(A (+) B)")
    p.add_argument("matrix", help="JSON matrix file holding P (mn x mn)")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--json", action="store_true", help="print the report as JSON")

    p = sub.add_parser("synthesize", help="write P = I + sum A_j (x) B_j with traceless factors")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--r", type=_non_negative, default=1)
    p.add_argument("--seed", type=_non_negative, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("suite", help="run the seeded property suite")
    p.add_argument("--seed", type=_non_negative, default=0)
    p.add_argument("--trials", type=_non_negative, default=DEFAULT_TRIALS)
    p.add_argument("--dims", default=",".join(DEFAULT_DIMS),
                   help="comma separated list such as 2x2,2x3,3x3")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--json", action="store_true")
    p.add_argument("--workers", type=_positive, default=1)
    return parser


def _format_matrix(a) -> str:
    rows = []
    for row in np.asarray(a):
        rows.append("  [" + ", ".join(f"{z.real:+.3e}{z.imag:+.3e}j" for z in row) + "]")
    return "\n".join(rows)


def cmd_verify_left(args) -> int:
    try:
        p = read_matrix(args.matrix)
        report = check_left_mult(p, (args.m, args.n), args.tol)
    except (OSError, MatrixFileError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(f"dims: {args.m}x{args.n}")
        print(f"condition (tr_1 P = m I_n, tr_2 P = n I_m): {report.holds_condition}")
        print(f"oracle (tr phi(A (+) B) = tr(A (+) B)): {report.holds_oracle}")
        print(f"max_defect: {report.max_defect:.6e}")
        print("residual_1 = tr_1(P) - m I_n:")
        print(_format_matrix(report.residual_1))
        print("residual_2 = tr_2(P) - n I_m:")
        print(_format_matrix(report.residual_2))
    return EXIT_OK if report.holds_condition and report.holds_oracle else EXIT_FAIL


def cmd_synthesize(args) -> int:
    dims = (args.m, args.n)
    p = synth_left_mult_preserver(dims, args.r, args.seed)
    if not oracle_preserves_trace(left_mult(p), dims):
        print("error: synthesized matrix failed the oracle", file=sys.stderr)
        return EXIT_FAIL
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps_matrix(p))
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_suite(args) -> int:
    try:
        dims_list = [check_dims(d.strip()) for d in args.dims.split(",") if d.strip()]
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not dims_list:
        print("error: --dims is empty", file=sys.stderr)
        return EXIT_USAGE
    report = run_suite(args.seed, args.trials, dims_list, args.tol, workers=args.workers)
    print(report.to_json() if args.json else report.to_text())
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {"verify-left": cmd_verify_left, "synthesize": cmd_synthesize, "suite": cmd_suite}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # usage errors (2) and --help (0) come back as return codes
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
