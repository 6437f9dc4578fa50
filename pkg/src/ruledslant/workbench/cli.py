"""Command-line front end.

Exit codes: 0 success, 1 unreadable input or bad arguments, 2 degenerate
geometry or a violated hypothesis.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from ..errors import GeometryError, HypothesisError, InputError
from ..frenet import ruled_apparatus
from ..offsets import bertrand_offset, mannheim_construct
from ..slant import Tolerances, classify
from ..surfbase import from_curvatures
from . import surfaces
from .report import report_document, report_text


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _num(text):
    try:
        return surfaces.parse_number(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ruledslant", description="Classify ruled surfaces as q-, h- or a-slant.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="compute the apparatus and run every classifier")
    c.add_argument("--input", required=True, help="SurfaceFile JSON, sample CSV or builtin:NAME")
    c.add_argument("--tol-ratio", type=_num, default=1e-3)
    c.add_argument("--tol-sigma", type=_num, default=1e-3)
    c.add_argument("--tol-det", type=_num, default=1e-6)
    c.add_argument("--samples", type=int, default=None)
    c.add_argument("--theta", type=_num, default=None,
                   help="also check the closed-form axis of a k1 = 1 h-slant surface at this angle")
    c.add_argument("--report", help="write the JSON report here")
    c.add_argument("--text", action="store_true", help="print a text summary")

    g = sub.add_parser("generate", help="synthesize a surface from prescribed curvatures")
    g.add_argument("--k1", required=True)
    g.add_argument("--k2", required=True)
    g.add_argument("--phi", default="0")
    g.add_argument("--range", required=True, dest="range_", metavar="A:B")
    g.add_argument("--samples", type=int, default=1024)
    g.add_argument("--out", required=True, help=".json (curvatures document) or .csv (samples)")

    e = sub.add_parser("export", help="write a Wavefront OBJ mesh")
    e.add_argument("--input", required=True)
    e.add_argument("--v-range", required=True, metavar="A:B")
    e.add_argument("--nu", type=int, default=64)
    e.add_argument("--nv", type=int, default=16)
    e.add_argument("--out", required=True)

    o = sub.add_parser("offset", help="build a Bertrand or Mannheim offset")
    o.add_argument("--input", required=True)
    o.add_argument("--kind", choices=("bertrand", "mannheim"), required=True)
    o.add_argument("--alpha", type=_num, default=0.0)
    o.add_argument("--dist", type=_num, default=0.0)
    o.add_argument("--beta0", type=_num, default=0.0)
    o.add_argument("--samples", type=int, default=None)
    o.add_argument("--out", required=True, help=".csv, or .json plus a sibling .csv")

    b = sub.add_parser("builtin", help="list or write builtin fixtures")
    grp = b.add_mutually_exclusive_group(required=True)
    grp.add_argument("--list", action="store_true")
    grp.add_argument("--name")
    b.add_argument("--out")
    return p


def _check_theta(theta):
    if theta is None:
        return
    if not 0.0 < theta < math.pi / 2 or abs(theta - math.pi / 2) < 1e-12:
        raise HypothesisError(f"theta = {theta:.6g} rejected: the slant angle must lie in (0, pi/2) "
                              "and a right angle is excluded")


def _write(path, text):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from None


def _classify(args, out):
    _check_theta(args.theta)
    spec, digest = surfaces.load_input(args.input)
    if args.samples is not None:
        if args.samples < surfaces.MIN_FILE_SAMPLES:
            raise InputError(f"--samples must be >= {surfaces.MIN_FILE_SAMPLES}")
        spec = replace(spec, samples=args.samples)
    tol = Tolerances(ratio=args.tol_ratio, sigma=args.tol_sigma, det=args.tol_det)
    report = classify(spec, tol, spec.samples, theta=args.theta)
    doc = report_document(report, args.input, digest, spec.samples)
    if args.report:
        _write(args.report, json.dumps(doc, indent=2) + "\n")
    if args.text:
        out.write(report_text(report))
    elif not args.report:
        out.write(json.dumps(doc, indent=2) + "\n")


def _generate(args, out):
    a, b = surfaces.parse_range(args.range_)
    if args.samples < surfaces.MIN_FILE_SAMPLES:
        raise InputError(f"--samples must be >= {surfaces.MIN_FILE_SAMPLES}")
    spec = from_curvatures(args.k1, args.k2, args.phi, (a, b), args.samples)
    if str(args.out).lower().endswith(".csv"):
        surfaces.write_csv(spec, args.out)
    else:
        doc = {"kind": "curvatures", "k1": args.k1, "k2": args.k2, "phi": args.phi,
               "range": [a, b], "samples": args.samples}
        _write(args.out, json.dumps(doc, indent=2) + "\n")


def _export(args, out):
    spec, _ = surfaces.load_input(args.input)
    surfaces.export_obj(spec, surfaces.parse_range(args.v_range), args.nu, args.nv, args.out)


def _offset(args, out):
    spec, _ = surfaces.load_input(args.input)
    ff = ruled_apparatus(spec, args.samples)
    if args.kind == "bertrand":
        off = bertrand_offset(ff, args.alpha, args.dist)
    else:
        off = mannheim_construct(ff, args.beta0, args.dist)
    target = Path(args.out)
    if target.suffix.lower() == ".csv":
        surfaces.write_csv(off, target)
    else:
        table = target.with_suffix(".csv")
        surfaces.write_csv(off, table)
        _write(target, json.dumps({"kind": "sampled", "path": table.name}, indent=2) + "\n")
    for w in off.meta.get("warnings", []):
        print(f"warning: {w}", file=sys.stderr)


def _builtin(args, out):
    if args.list:
        out.write("\n".join(surfaces.builtin_names()) + "\n")
        return
    doc = surfaces.builtin_document(args.name)
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        _write(args.out, text)
    else:
        out.write(text)


_COMMANDS = {"classify": _classify, "generate": _generate, "export": _export,
             "offset": _offset, "builtin": _builtin}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args, out)
    except _Usage as exc:
        print(f"ruledslant: error: {exc}", file=sys.stderr)
        return 1
    except GeometryError as exc:
        print(f"ruledslant: {exc}", file=sys.stderr)
        return 2
    except (InputError, OSError, ValueError) as exc:
        print(f"ruledslant: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
