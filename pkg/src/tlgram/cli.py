"""``tlgram`` command line.

Exit codes: 0 success or all checks pass, 1 a check failed, 2 usage
error, 3 requested size outside the supported range. Data goes to stdout
(or ``--output``), diagnostics to stderr. ``TLGRAM_WORKERS`` sets the
number of processes used for the evaluation-grid determinants.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from . import grammat, ncpart, tldiag
from .grammat import LIMITS, VerificationReport
from .ncpart import PartitionParseError, SizeLimitError
from .polyalg import Poly

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

CHECKS = ("theoremA", "theoremB", "lemma", "det", "det1", "sums", "annular", "all")

# symbolic determinant guards per matrix type
DET_LIMITS = {"A": 5, "B": 3}


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj) + "\n"


def _monomial_text(ea: int, ed: int) -> str:
    return str(Poly.monomial(ea, ed))


# --- subcommands -------------------------------------------------------------------

def cmd_enumerate(args) -> tuple[int, str]:
    parts = ncpart.enumerate_nc_a(args.n) if args.type == "A" else ncpart.enumerate_nc_b(args.n)
    if args.format == "json":
        return EXIT_OK, _dump({"type": args.type, "n": args.n, "partitions": [p.to_json() for p in parts]})
    return EXIT_OK, "".join(p.encode() + "\n" for p in parts)


def cmd_bijection(args) -> tuple[int, str]:
    if args.annular and args.type != "B":
        raise UsageError("--annular applies to type B only")
    if args.partition is not None:
        parts = [ncpart.parse(args.partition, args.type, args.n)]
        if not ncpart.is_noncrossing(parts[0]):
            raise UsageError(f"{args.partition} is crossing")
    else:
        parts = ncpart.enumerate_nc_a(args.n) if args.type == "A" else ncpart.enumerate_nc_b(args.n)
    iota = tldiag.iota_a if args.type == "A" else tldiag.iota_b
    rows = []
    for p in parts:
        b = iota(p)
        row = {"partition": p, "matching": b}
        if args.annular:
            row["annular"] = tldiag.to_annular(b)
        rows.append(row)
    if args.format == "json":
        return EXIT_OK, _dump([{k: v.to_json() for k, v in row.items()} for row in rows])
    return EXIT_OK, "".join(" -> ".join(str(v) for v in row.values()) + "\n" for row in rows)


def cmd_matrix(args) -> tuple[int, str]:
    m = grammat.build_matrix(args.kind, args.n)
    if args.format == "json":
        return EXIT_OK, _dump(m.to_json())
    lines = [f"{m.kind} n={m.n} size={m.size}"]
    lines += [f"basis {i}: {label}" for i, label in enumerate(m.basis_labels())]
    lines += ["\t".join(_monomial_text(ea, ed) for ea, ed in row) for row in m.entries]
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_det(args) -> tuple[int, str]:
    type_ = args.kind[1]
    if args.two_variable and type_ != "B":
        raise UsageError("--two-variable applies to JB and GB only")
    if args.raw and args.kind[0] != "J":
        raise UsageError("--raw applies to JA and JB only")
    if not 1 <= args.n <= DET_LIMITS[type_]:
        raise SizeLimitError(f"symbolic {args.kind} determinants support 1 <= n <= {DET_LIMITS[type_]}")
    m = grammat.build_matrix(args.kind, args.n)
    squares = args.kind[0] == "J" and not args.raw
    det = grammat.det_bareiss(m.to_polys(squares=squares, alpha_one=not args.two_variable))
    if args.format == "json":
        return EXIT_OK, _dump({"kind": args.kind, "n": args.n, "two_variable": args.two_variable,
                               "squares": squares, "det": det.to_json()})
    return EXIT_OK, str(det) + "\n"


def _run_check(check: str, n: int, method: str) -> VerificationReport:
    if check == "theoremA":
        return grammat.verify_theorem_a(n)
    if check == "theoremB":
        return grammat.verify_theorem_b(n)
    if check == "lemma":
        return grammat.verify_lemma_bk0(n)
    if check in ("det", "det1"):
        return grammat.verify_det_b(n, method, two_variable=check == "det")
    if check == "sums":
        return grammat.verify_detp_and_involution(n)
    if check == "annular":
        return grammat.verify_annular(n)
    raise UsageError(f"unknown check {check!r}")


def _max_n(check: str, method: str) -> int:
    if check in ("det", "det1"):
        return LIMITS["det_symbolic" if method == "symbolic" else "det_evaluation"]
    return LIMITS[check]


def default_plan(overrides: dict[str, int] | None = None) -> list[tuple[str, int, str]]:
    """Every check at every size up to its configured maximum."""
    overrides = overrides or {}
    plan = []
    for check in ("theoremA", "theoremB", "lemma", "sums", "annular"):
        top = overrides.get(check, LIMITS[check])
        plan += [(check, n, "symbolic") for n in range(1, top + 1)]
    for check in ("det", "det1"):
        top = overrides.get(check, LIMITS["det_symbolic"])
        plan += [(check, n, "symbolic") for n in range(1, top + 1)]
    top = overrides.get("det_evaluation", LIMITS["det_evaluation"])
    plan += [("det", top, "evaluation")] if top else []
    return plan


def verify_all(overrides: dict[str, int] | None = None) -> tuple[bool, list[VerificationReport]]:
    reports = [_run_check(check, n, method) for check, n, method in default_plan(overrides)]
    return all(r.passed for r in reports), reports


def _format_reports(reports: list[VerificationReport], fmt: str, aggregate: bool) -> str:
    ok = all(r.passed for r in reports)
    if fmt == "json":
        if not aggregate and len(reports) == 1:
            return _dump(reports[0].to_json())
        return _dump({"pass": ok, "reports": [r.to_json() for r in reports]})
    lines = [r.line() for r in reports]
    if aggregate:
        failed = [r for r in reports if not r.passed]
        lines.append("PASS all" if ok else f"FAIL all first={failed[0].check} n={failed[0].n}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> tuple[int, str]:
    if args.check == "all":
        if args.n is not None:
            raise UsageError("--check all runs every size; drop --n")
        ok, reports = verify_all()
        return (EXIT_OK if ok else EXIT_FAIL), _format_reports(reports, args.format, True)
    if args.method == "evaluation" and args.check not in ("det", "det1"):
        raise UsageError("--method applies to the det checks only")
    top = _max_n(args.check, args.method)
    sizes = [args.n] if args.n is not None else list(range(1, top + 1))
    reports = [_run_check(args.check, n, args.method) for n in sizes]
    ok = all(r.passed for r in reports)
    return (EXIT_OK if ok else EXIT_FAIL), _format_reports(reports, args.format, False)


def _parse_limit(text: str) -> tuple[str, int]:
    name, _, value = text.partition("=")
    valid = ("theoremA", "theoremB", "lemma", "sums", "annular", "det", "det1", "det_evaluation")
    if name not in valid or not value.isdigit():
        raise argparse.ArgumentTypeError(f"expected CHECK=N with CHECK in {valid}")
    return name, int(value)


def cmd_verify_all(args) -> tuple[int, str]:
    overrides = dict(args.limit or [])
    for name, value in overrides.items():
        cap = LIMITS["det_symbolic"] if name in ("det", "det1") else LIMITS[name]
        if value > cap:
            raise SizeLimitError(f"{name} supports n <= {cap}, got {value}")
    ok, reports = verify_all(overrides)
    return (EXIT_OK if ok else EXIT_FAIL), _format_reports(reports, args.format, True)


# --- parser ----------------------------------------------------------------------

def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("n must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tlgram",
        description="Chromatic joins and Temperley-Lieb Gram matrices over non-crossing partitions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", "-o", help="write data here instead of stdout")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list non-crossing partitions")
    p.add_argument("--type", choices=("A", "B"), required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("bijection", parents=[common], help="partitions and their diagrams")
    p.add_argument("--type", choices=("A", "B"), required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--partition", help="map one partition, e.g. '{1,3}{2}'")
    p.add_argument("--annular", action="store_true", help="also show the annular quotient (type B)")
    p.set_defaults(func=cmd_bijection)

    p = sub.add_parser("matrix", parents=[common], help="build a monomial matrix")
    p.add_argument("--kind", choices=grammat.KINDS, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("det", parents=[common], help="exact determinant of a matrix")
    p.add_argument("--kind", choices=grammat.KINDS, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--two-variable", action="store_true",
                   help="keep alpha (type B); otherwise alpha is set to 1")
    p.add_argument("--raw", action="store_true",
                   help="J kinds: skip the a -> a^2, d -> d^2 substitution")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("verify", parents=[common], help="run one check")
    p.add_argument("--check", choices=CHECKS, required=True)
    p.add_argument("--n", type=_positive, help="single size; default runs 1..max")
    p.add_argument("--method", choices=("symbolic", "evaluation"), default="symbolic")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", parents=[common], help="run every check at its configured sizes")
    p.add_argument("--limit", type=_parse_limit, action="append", metavar="CHECK=N",
                   help="override the maximum n of one check (0 skips it)")
    p.set_defaults(func=cmd_verify_all)
    return parser


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None,
        stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        code, text = args.func(args)
    except (UsageError, PartitionParseError) as exc:
        print(f"tlgram: error: {exc}", file=stderr)
        return EXIT_USAGE
    except SizeLimitError as exc:
        print(f"tlgram: size limit: {exc}", file=stderr)
        return EXIT_LIMIT
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if code == EXIT_FAIL:
        print("tlgram: verification failed", file=stderr)
    return code


def main() -> None:
    sys.exit(run())
