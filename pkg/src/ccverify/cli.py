"""Command line entry point: ``ccverify {verify,eval,gap-table,report}``.

Environment variables are never consulted; every knob is a flag.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import duality as du
from .certificate import jsonify
from .exact_number import DEFAULT_DIGITS_CAP, Budget, ExactValue, Undecidable, to_decimal
from .func_lib import STANDARD_F, eval_f, eval_f_conj
from .op_lib import apply_A
from .report import (
    EXIT_INCONCLUSIVE,
    EXIT_PASS,
    EXIT_USAGE,
    SUITES,
    SuiteBudget,
    gap_table_rows,
    run_suite,
)
from .seq_core import FiniteSeq


class ParseError(ValueError):
    pass


FUNCTIONS = {
    "f": lambda x: eval_f(STANDARD_F, x),
    "f-conj": lambda y: ExactValue(eval_f_conj(STANDARD_F, y)),
    "f-compose-A": lambda x: eval_f(STANDARD_F, apply_A(x)),
    "zero": lambda x: du.evaluate(du.zero_fn(), x),
    "zero-conj": lambda y: du.conjugate(du.zero_fn(), y),
    "indicator-origin": lambda x: du.evaluate(du.indicator_origin(), x),
    "indicator-origin-conj": lambda y: du.conjugate(du.indicator_origin(), y),
}


def load_sequence(path: str | Path) -> FiniteSeq:
    try:
        data = json.loads(Path(path).read_text())
        return FiniteSeq.from_json(data)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def write_sequence(x: FiniteSeq, path: str | Path) -> None:
    Path(path).write_text(json.dumps(x.to_json()) + "\n")


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--zeta-N", dest="zeta_n", type=int, default=10**4, help="truncation of zeta enclosures")
    p.add_argument("--precision-bits", type=int, default=128)
    p.add_argument("--truncation-max", type=int, default=64)
    p.add_argument("--digits", type=int, default=6)


def _budget(args) -> SuiteBudget:
    return SuiteBudget(
        zeta_n=args.zeta_n,
        precision_bits=args.precision_bits,
        truncation_max=args.truncation_max,
        max_zeta_n=max(10**6, args.zeta_n),
        digits=args.digits,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccverify",
        description="Exact certificates for a convex function on c_c with empty subdifferential.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    _add_budget_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("eval", help="evaluate a catalog function on a sequence file")
    p.add_argument("function", choices=sorted(FUNCTIONS))
    p.add_argument("--input", required=True, help='JSON file {"entries": [[n, "p/q"], ...]}')
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--digits", type=int, default=6)

    p = sub.add_parser("gap-table", help="truncated dual values of min f(Ax)")
    _add_budget_flags(p)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p = sub.add_parser("report", help="write JSON and text reports for a suite")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--output-dir", required=True)
    _add_budget_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text", help="format echoed to stdout")
    return parser


def _cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed, _budget(args))
    sys.stdout.write(report.dumps() if args.format == "json" else report.render_text())
    failure = report.first_failure()
    if failure is not None:
        print(f"first failing certificate: {failure.claim}", file=sys.stderr)
    return report.exit_code


def _cmd_eval(args) -> int:
    if args.digits > DEFAULT_DIGITS_CAP or args.digits < 0:
        print(f"error: --digits must be in [0, {DEFAULT_DIGITS_CAP}]", file=sys.stderr)
        return EXIT_USAGE
    try:
        x = load_sequence(args.input)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    value = FUNCTIONS[args.function](x)
    out: dict = {"function": args.function, "input": x.to_json()}
    if value is du.INFINITE:
        out["value"] = "infinite"
    else:
        try:
            text, enc = to_decimal(value, args.digits, Budget())
        except Undecidable as exc:
            print(f"inconclusive: {exc}", file=sys.stderr)
            return EXIT_INCONCLUSIVE
        out.update({"value": value.to_json(), "decimal": text, "enclosure": enc.to_json()})
    if args.format == "json":
        print(json.dumps(out, sort_keys=True))
    elif value is du.INFINITE:
        print("value: infinite")
    else:
        print(f"value: {value}")
        print(f"decimal: {out['decimal']}")
        print(f"enclosure: [{out['enclosure'][0]}, {out['enclosure'][1]}]")
    return EXIT_PASS


def _cmd_gap_table(args) -> int:
    rows = gap_table_rows(_budget(args))
    if args.format == "json":
        print(json.dumps([jsonify(r) for r in rows], indent=2, sort_keys=True))
        return EXIT_PASS
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t" if args.format == "text" else ",", lineterminator="\n")
    writer.writerow(["N", "dual_value", "dual_decimal", "gap_decimal", "gap_lo", "gap_hi"])
    for r in rows:
        lo, hi = r["gap_enclosure"].to_json()
        writer.writerow([r["N"], jsonify(r["dual_value"]), r["dual_decimal"], r["gap_decimal"], lo, hi])
    sys.stdout.write(buf.getvalue())
    return EXIT_PASS


def _cmd_report(args) -> int:
    report = run_suite(args.suite, args.seed, _budget(args))
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.dumps())
    (out / "report.txt").write_text(report.render_text())
    sys.stdout.write(report.dumps() if args.format == "json" else report.render_text())
    return report.exit_code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "verify": _cmd_verify,
        "eval": _cmd_eval,
        "gap-table": _cmd_gap_table,
        "report": _cmd_report,
    }[args.command]
    try:
        return handler(args)
    except Undecidable as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
