"""Command-line entry point: compute, density, verify."""

from __future__ import annotations

import argparse
import logging
import math
import sys

from . import harness
from .errors import TmodError
from .rayclass import DEFAULT_NMAX
from .torsion import TpReport

DEFAULT_KIND = {
    "imag-all": "rk4",
    "real-all": "order",
    "minus-l": "structure",
    "minus-2l": "structure",
    "plus-l": "order",
    "plus-2l": "order",
}


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--precision-bits", type=int, default=d(64),
                   help="p-adic working precision in bits (default 64)")
    p.add_argument("--nmax", type=int, default=d(DEFAULT_NMAX),
                   help="highest ray-class level tried before giving up")
    p.add_argument("--cache", default=d(None), help="append-only CSV cache of per-field results")
    p.add_argument("--format", choices=("csv", "md"), default=d("md"), help="output format")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tmod", description="Z_p-torsion modules of quadratic fields")
    _add_globals(ap, suppress=False)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="invariants of one field Q(sqrt m)")
    _add_globals(c, suppress=True)
    c.add_argument("--m", type=int, required=True, help="squarefree radicand (negative for imaginary)")
    c.add_argument("--p", type=int, default=2)
    c.add_argument("--method", choices=("auto", "redei", "coates", "rayclass"), default="auto")

    d = sub.add_parser("density", help="proportions of an invariant over a family")
    _add_globals(d, suppress=True)
    d.add_argument("--family", choices=harness.FAMILY_TAGS, required=True)
    d.add_argument("--p", type=int, default=2)
    d.add_argument("--bound", type=int, required=True)
    d.add_argument("--mod", type=int, default=None)
    d.add_argument("--res", default=None, help="comma-separated residues for --mod")
    d.add_argument("--kind", choices=harness.KINDS, default=None)
    d.add_argument("--method", choices=("auto", "classifier", "coates", "rayclass", "full"), default="auto")
    d.add_argument("--workers", type=int, default=1)
    d.add_argument("--out", default=None, help="table output path (stdout if omitted)")
    d.add_argument("--raw", default=None, help="per-field CSV output path")

    v = sub.add_parser("verify", help="run a verification suite")
    _add_globals(v, suppress=True)
    v.add_argument("--suite", required=True, help="suite name or 'all'")
    v.add_argument("--bound", type=int, default=None)
    return ap


def _digits(bits: int, p: int) -> int:
    return max(8, math.ceil(bits / math.log2(p)))


def cmd_compute(args) -> int:
    rep: TpReport = harness.compute_report(args.m, args.p, args.method, args.nmax,
                                           _digits(args.precision_bits, args.p))
    if args.format == "csv":
        sys.stdout.write(TpReport.csv_header() + rep.csv_row())
    else:
        print(rep.text())
    return 0


def cmd_density(args) -> int:
    residues = None
    if (args.mod is None) != (args.res is None):
        raise SystemExit("--mod and --res must be given together")
    if args.res is not None:
        residues = tuple(int(x) for x in args.res.split(","))
    fam = harness.Family(args.family, args.bound, args.p, args.mod, residues)
    kind = args.kind or DEFAULT_KIND[args.family]
    cache = harness.ResultCache(args.cache) if args.cache else None
    res = harness.run_family(fam, kind, args.method, harness.default_predictions(fam, kind), cache,
                             args.nmax, _digits(args.precision_bits, args.p), args.workers)
    table = res.table_csv() if args.format == "csv" else f"{fam.label()}, {kind}\n\n" + res.table_md()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(table)
    else:
        sys.stdout.write(table)
    if args.raw:
        with open(args.raw, "w", encoding="utf-8", newline="") as fh:
            fh.write(res.raw_csv())
    return 0


def cmd_verify(args) -> int:
    names = sorted(harness.SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        kwargs = {}
        if name in ("redei-vs-rayclass", "classifier-vs-rayclass", "coates-vs-rayclass"):
            kwargs["nmax"] = args.nmax
        rep = harness.verify_suite(name, args.bound, **kwargs)
        print(rep.text())
        ok = ok and rep.passed
    return 0 if ok else 2


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "compute":
            return cmd_compute(args)
        if args.command == "density":
            return cmd_density(args)
        return cmd_verify(args)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 1
    except (TmodError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
