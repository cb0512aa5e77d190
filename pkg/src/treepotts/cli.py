"""Command-line front end.

Exit codes: 0 success, 2 a check ran and failed (not certified, table
mismatch, inequality not proven), 1 usage or unsupported parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .interval import default_precision

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for failed checks here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_d_range(text: str) -> list[int]:
    """``"4..12"``, ``"4,6,8"`` or ``"7"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise UsageError(f"empty range {part!r}")
            out.extend(range(lo_i, hi_i + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError("no d values given")
    return out


def _rational(text: str) -> Fraction:
    from .maps import parse_rational

    try:
        return parse_rational(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args):
    from .maps import PottsParams

    try:
        return PottsParams(args.k, args.d, args.w)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- commands ------------------------------------------------------------

def cmd_certify(args) -> int:
    from .certify import SequenceOptions, UnsupportedParameters, certify_uniqueness

    opts = SequenceOptions(
        max_iters=args.steps if args.steps is not None else SequenceOptions.max_iters,
        bisection_tol=args.tol if args.tol is not None else SequenceOptions.bisection_tol,
        seed=args.seed,
        **({"audit_sample": args.sample} if args.sample else {}),
    )
    try:
        cert = certify_uniqueness(args.k, args.d, args.w, opts, prec=args.precision)
    except UnsupportedParameters as exc:
        raise UsageError(str(exc)) from exc
    _emit(cert.to_json(), args.out)
    print(f"status: {cert.status.value} ({cert.reason}); steps: {len(cert.sequence) - 1}",
          file=sys.stderr)
    return EXIT_OK if cert.certified else EXIT_FAILED


def cmd_iterate(args) -> int:
    from .maps import iterate_F, parse_rational, preset_point

    params = _params(args)
    spec = args.x0 or "corner"
    try:
        if any(ch.isalpha() for ch in spec):
            x0 = preset_point(spec, params)
        else:
            x0 = tuple(parse_rational(p) for p in spec.split(","))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if len(x0) != params.k - 1:
        raise UsageError(f"--x0 needs {params.k - 1} entries")
    tol = args.tol if args.tol is not None else Fraction(1, 10**9)
    trace = iterate_F(x0, params, max_steps=args.steps or 500, tol=tol, prec=args.precision)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step"] + [f"x{i}" for i in range(1, params.k)] + ["max_abs_dev"])
    for step, (x, dist) in enumerate(zip(trace.orbit, trace.distances)):
        writer.writerow([step] + [f"{float(v):.15g}" for v in x] + [f"{dist:.6e}"])
    extra = f" (cycle length {trace.cycle_length})" if trace.cycle_length else ""
    buf.write(f"# verdict: {trace.verdict.value} at step {trace.stop_step}{extra}\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_bruteforce(args) -> int:
    from .bruteforce import write_bruteforce_csv

    params = _params(args)
    if args.n is None:
        raise UsageError("--n is required")
    buf = io.StringIO()
    try:
        res = write_bruteforce_csv(buf, args.n, params, sample=args.sample, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(buf.getvalue(), args.out)
    witness = "".join(map(str, res.witness))
    print(f"worst_case_deviation={res.deviation} ({float(res.deviation):.6g}) "
          f"witness={witness} colour={res.color} rows={res.evaluated}", file=sys.stderr)
    return EXIT_OK


def cmd_tables(args) -> int:
    from .certify import UnsupportedParameters, regenerate_tables

    d_values = parse_d_range(args.d_range or "4..12")
    try:
        report = regenerate_tables(args.k, d_symbolic=args.symbolic, d_values=d_values,
                                   tamper=args.tamper)
    except (UnsupportedParameters, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    lines = [report.summary()] + [f"MISMATCH {m}" for m in report.mismatches]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_region(args) -> int:
    from .regions import RegionParams, region_svg, vertices_csv

    if args.a is None or args.b is None:
        raise UsageError("--a and --b are required")
    try:
        region = RegionParams(args.a, args.b, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not region.valid:
        raise UsageError(f"(a, b) = ({region.a}, {region.b}) is outside the valid range")
    fmt = args.format or ("svg" if args.k == 3 else "csv")
    if fmt == "svg":
        if args.k != 3:
            raise UsageError("SVG export exists for k=3 only; use --format csv for k=4")
        text = region_svg(region, prec=args.precision)
    elif fmt == "csv":
        text = vertices_csv(region, prec=args.precision)
    else:
        raise UsageError("region export supports --format svg or csv")
    _emit(text, args.out)
    return EXIT_OK


def cmd_inequalities(args) -> int:
    from .certify import UnsupportedParameters, critical_activity, verify_inequality

    which = [int(x) for x in (args.which or "1,2,3,4").split(",")]
    w = args.w if args.w is not None else critical_activity(args.k, args.d)
    try:
        records = [verify_inequality(i, args.k, args.d, w) for i in which]
    except UnsupportedParameters as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        text = json.dumps([r.to_dict() for r in records], indent=2) + "\n"
    else:
        text = "".join(f"ineq{r.which}: {r.status} ({r.method or 'no method'})\n" for r in records)
    _emit(text, args.out)
    return EXIT_OK if all(r.proven for r in records) else EXIT_FAILED


COMMANDS = {
    "certify": cmd_certify,
    "iterate": cmd_iterate,
    "bruteforce": cmd_bruteforce,
    "tables": cmd_tables,
    "region": cmd_region,
    "inequalities": cmd_inequalities,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treepotts", description="Uniqueness certificates for the Potts model on regular trees.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, need_d=True, need_w=True):
        p.add_argument("--k", type=int, required=True, help="number of colours")
        if need_d:
            p.add_argument("--d", type=int, required=True, help="branching number (tree degree minus one)")
        if need_w:
            p.add_argument("--w", type=_rational, required=True, help="edge activity as num/den")
        p.add_argument("--precision", type=_positive_int, default=None, help="interval precision in bits")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("certify", help="run the full uniqueness certification")
    common(p)
    p.add_argument("--steps", type=_positive_int, default=None, help="maximum sequence length")
    p.add_argument("--tol", type=_rational, default=None, help="relative bisection tolerance")
    p.add_argument("--sample", type=_positive_int, default=None, help="audit sample size")

    p = sub.add_parser("iterate", help="iterate F from a starting point")
    common(p)
    p.add_argument("--x0", default=None, help="comma-separated rationals or a preset: corner, spike-i, ones")
    p.add_argument("--steps", type=_positive_int, default=None)
    p.add_argument("--tol", type=_rational, default=None)

    p = sub.add_parser("bruteforce", help="enumerate boundary conditions on a finite tree")
    common(p)
    p.add_argument("--n", type=int, default=None, help="tree depth")
    p.add_argument("--sample", type=_positive_int, default=None)

    p = sub.add_parser("tables", help="regenerate the P0 coefficient and cascade tables")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", dest="d_range", default=None, help="d values, e.g. 4..12 or 4,6,8")
    p.add_argument("--symbolic", action="store_true", help="compare with d kept symbolic")
    p.add_argument("--tamper", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--out", default=None)

    p = sub.add_parser("region", help="export the region T_{a,b}")
    common(p, need_d=False, need_w=False)
    p.add_argument("--a", type=_rational, default=None)
    p.add_argument("--b", type=_rational, default=None)
    p.add_argument("--format", choices=("svg", "csv"), default=None)

    p = sub.add_parser("inequalities", help="prove the one-variable inequalities")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--w", type=_rational, default=None, help="activity (default: critical)")
    p.add_argument("--which", default=None, help="comma-separated subset of 1,2,3,4")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "precision", None) is None and hasattr(args, "precision"):
        args.precision = default_precision()
    if getattr(args, "precision", None):
        # functions that fall back to the default pick this up too
        os.environ["POTTS_PRECISION_BITS"] = str(args.precision)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"treepotts {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
