"""Command-line entry point.

Exit codes: 0 success, 1 verification failed, 2 solver limit reached,
3 unreadable input, 4 plot of a non-planar document.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io
from .discrete import enumerate_all_cuts, solve_touching_cut
from .errors import CapExceededError, ParseError, RetryLimitError, SweepFailedError
from .measure import solve_measure_cut
from .oracle import gen_saltpepper, verify, verify_grids
from .shapes import rasterize
from .svg import render

EXIT_OK, EXIT_REJECTED, EXIT_LIMIT, EXIT_PARSE, EXIT_DIM = 0, 1, 2, 3, 4


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(payload, out=None):
    text = json.dumps(payload, indent=1) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _floats(text, count=None):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ParseError(f"expected comma-separated numbers, got {text!r}", 1, 1) from None
    if count is not None and len(values) != count:
        raise ParseError(f"expected {count} numbers, got {len(values)}", 1, 1)
    return values


def cmd_solve_discrete(args):
    inst = io.load_instance(_read(args.file))
    if args.all:
        cuts = enumerate_all_cuts(inst)
        _emit({"cuts": [io.solution_dict(s) for s in cuts]}, args.out)
    else:
        _emit(io.solution_dict(solve_touching_cut(inst, workers=args.threads)), args.out)
    return EXIT_OK


def cmd_solve_measure(args):
    shapes = io.load_shapes(_read(args.file))
    sol, trace = solve_measure_cut(shapes, _floats(args.schedule), strategy=args.strategy,
                                   workers=args.threads)
    _emit({"solution": io.solution_dict(sol), "trace": io.trace_dict(trace)}, args.out)
    return EXIT_OK


def cmd_verify(args):
    text = _read(args.file)
    plane = io.parse_plane(args.plane)
    if io.document_kind(text) == "instance":
        rep = verify(io.load_instance(text), plane, 0)
    else:
        shapes = io.load_shapes(text)
        h = float(Fraction(args.h))
        rep = verify_grids([rasterize(s, h) for s in shapes], plane, tol=args.tol)
    _emit(io.verify_dict(rep), args.out)
    return EXIT_OK if rep.verdict else EXIT_REJECTED


def cmd_gen_saltpepper(args):
    try:
        bbox = tuple(Fraction(v.strip()) for v in args.bbox.split(","))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bbox must be x0,y0,x1,y1, got {args.bbox!r}", 1, 1) from None
    if len(bbox) != 4:
        raise ParseError(f"bbox must have 4 numbers, got {len(bbox)}", 1, 1)
    inst = gen_saltpepper(args.seed, args.salt, args.pepper, bbox)
    sys.stdout.write(io.dump_instance(inst))
    return EXIT_OK


def cmd_plot(args):
    text = _read(args.file)
    plane = io.parse_plane(args.plane) if args.plane else None
    if plane is not None and plane.dim != 2:
        print("plane must be two-dimensional", file=sys.stderr)
        return EXIT_DIM
    if io.document_kind(text) == "instance":
        inst = io.load_instance(text)
        if inst.dim != 2:
            print(f"plot supports dimension 2 only, got {inst.dim}", file=sys.stderr)
            return EXIT_DIM
        svg = render(measures=inst.measures, plane=plane)
    else:
        shapes = io.load_shapes(text)
        if shapes and shapes[0].dim != 2:
            print(f"plot supports dimension 2 only, got {shapes[0].dim}", file=sys.stderr)
            return EXIT_DIM
        svg = render(shapes=shapes, plane=plane)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="mayocut",
                                description="Touching ham-sandwich cuts.")
    sub = p.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="find a touching bisector")
    ssub = solve.add_subparsers(dest="kind", required=True)
    d = ssub.add_parser("discrete", help="atomic measures from an instance file")
    d.add_argument("file", help="instance file, or - for standard input")
    d.add_argument("--all", action="store_true", help="list every sampled touching cut")
    d.add_argument("--out")
    d.add_argument("--threads", type=int, default=None)
    d.set_defaults(func=cmd_solve_discrete)
    m = ssub.add_parser("measure", help="shapes from a shape file")
    m.add_argument("file")
    m.add_argument("--schedule", default="0.25,0.125,0.0625")
    m.add_argument("--strategy", choices=("sweep", "enumerate"), default="sweep")
    m.add_argument("--out")
    m.add_argument("--threads", type=int, default=None)
    m.set_defaults(func=cmd_solve_measure)

    v = sub.add_parser("verify", help="check a plane against an instance or shape file")
    v.add_argument("file")
    v.add_argument("--plane", required=True, help='e.g. "u=1,0;c=0"')
    v.add_argument("--h", default="1/16", help="cell size for shape files")
    v.add_argument("--tol", type=float, default=1e-9, help="side tolerance for shape files")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate instances")
    gsub = g.add_subparsers(dest="kind", required=True)
    sp = gsub.add_parser("saltpepper")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--salt", type=int, required=True)
    sp.add_argument("--pepper", type=int, required=True)
    sp.add_argument("--bbox", default="0,0,1,1")
    sp.set_defaults(func=cmd_gen_saltpepper)

    pl = sub.add_parser("plot", help="SVG picture of a planar document")
    pl.add_argument("file")
    pl.add_argument("--plane")
    pl.add_argument("--out", required=True)
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (RetryLimitError, SweepFailedError, CapExceededError) as exc:
        print(f"solver limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
