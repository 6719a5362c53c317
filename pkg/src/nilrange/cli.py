"""Command-line front end.

Exit codes: 0 success, 1 property violation, 2 usage or parse error,
3 unsupported input (dimension above 8).
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .certify import FAMILIES, draw, verify
from .errors import DegenerateRange, NumRangeError
from .families import (
    ExceptionalParams,
    construct_exceptional,
    parallel_canonical,
    real_family_matrix,
)
from .kippenhahn import coeffs_nilpotent4, default_search_radius, kippenhahn_form, singular_points
from .linalg import is_nilpotent
from .matrixio import MatrixParseError, UnsupportedMatrix, dumps, fmt, matrix_doc, read_matrix
from .numrange import N_SCAN, TWO_PI, flat_portions, sample_boundary, support_line
from .report import analyze, detect_reducible5
from .reducible5 import Reducible5Params, assemble_5x5, cardioid_curve
from .svg import render

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _tolerances(args):
    return {"n_scan": args.scan, "tol_mult": args.tol_mult, "tol_flat": args.tol_flat}


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(path):
    try:
        return read_matrix(path)
    except OSError as exc:
        raise MatrixParseError(str(exc)) from exc


def cmd_analyze(args, only_flats=False):
    A = _load(args.matrix)
    rep = analyze(A, only_flats=only_flats or args.only_flats, **_tolerances(args))
    _emit(rep.to_json(), args.output)
    return EXIT_OK


def cmd_flat_portions(args):
    return cmd_analyze(args, only_flats=True)


def cmd_boundary(args):
    if args.samples < 16:
        raise UsageError("--samples must be at least 16")
    A = _load(args.matrix)
    thetas = TWO_PI * np.arange(args.samples) / args.samples
    pts = sample_boundary(A, args.samples)
    if args.format == "csv":
        lines = ["theta,x,y"] + [f"{fmt(t)},{fmt(z.real)},{fmt(z.imag)}" for t, z in zip(thetas, pts)]
        _emit("\n".join(lines) + "\n", args.output)
        return EXIT_OK
    try:
        fps = flat_portions(A, **_tolerances(args))
    except DegenerateRange:
        fps = []
    lines = []
    if args.support_lines:
        lines = [fp.line for fp in fps] + [support_line(A, t) for t in TWO_PI * np.arange(8) / 8]
    overlays = []
    fam = detect_reducible5(A)
    if fam is not None:
        circle = fam.r / 2 * np.exp(1j * np.linspace(0, TWO_PI, 256, endpoint=False))
        overlays.append((circle, True))
        if fam.equal:
            overlays.append((cardioid_curve(fam.r1), False))
    doc = render(pts, [(fp.z1, fp.z2) for fp in fps], lines, overlays)
    _emit(doc, args.output)
    return EXIT_OK


def cmd_kippenhahn(args):
    A = _load(args.matrix)
    out = {"form": [[i, j, k, c] for (i, j, k), c in sorted(kippenhahn_form(A).as_dict().items())]}
    if A.shape == (4, 4) and is_nilpotent(A):
        q = coeffs_nilpotent4(A)
        out.update({f"c{k}": float(v) for k, v in enumerate(q.c, 1)})
        radius = args.radius if args.radius else default_search_radius(A)
        out["search_radius"] = radius
        out["singular_points"] = [p._asdict() for p in singular_points(q, radius)]
    else:
        out["singular_points"] = None
    _emit(json.dumps(out, sort_keys=True, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_construct(args):
    fam = args.family
    if fam == "exceptional":
        p = ExceptionalParams(args.alpha, args.a1, args.a2, args.a3, args.theta1, args.theta2)
        A = construct_exceptional(p)
    elif fam == "parallel":
        A = parallel_canonical(args.a1.real, args.a2.real, args.a3.real, args.alpha)
    elif fam == "real-family":
        A = real_family_matrix(args.a1.real, args.a2.real, args.a3.real)
    else:
        A = assemble_5x5(Reducible5Params(args.r, args.r1, args.r2, args.r3))
    _emit(dumps(A), args.output)
    return EXIT_OK


def cmd_verify(args):
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}; choose from {sorted(FAMILIES)}")
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    s = verify(args.family, args.trials, args.seed, **_tolerances(args))
    print(f"family {s.family}  trials {s.trials}  seed {s.seed}  bound {s.bound}")
    for count, freq in s.histogram.items():
        print(f"  {count} flat portions: {freq}")
    if s.degenerate:
        print(f"  degenerate ranges: {s.degenerate}")
    bad = sorted(set(s.violations) | set(s.parallel_violations))
    if not bad:
        print("ok")
        return EXIT_OK
    repro = []
    for idx in bad:
        A = draw(s.family, s.seed, idx)
        repro.append({"family": s.family, "seed": s.seed, "index": idx, "trial_seed": s.seed + idx,
                      "matrix": matrix_doc(A),
                      "count": len(flat_portions(A, **_tolerances(args)))})
    path = args.dump or f"nilrange-repro-{s.family}-{s.seed}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(repro, fh, sort_keys=True, indent=1)
    print(f"VIOLATION in {len(bad)} trial(s); reproducer written to {path}")
    return EXIT_VIOLATION


def build_parser():
    tol = argparse.ArgumentParser(add_help=False)
    tol.add_argument("--tol-mult", type=float, default=None, help="eigenvalue coincidence tolerance")
    tol.add_argument("--tol-flat", type=float, default=None, help="minimal flat-portion length")
    tol.add_argument("--scan", type=int, default=N_SCAN, help="number of scan angles")
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    ap = argparse.ArgumentParser(prog="nilrange", description="Numerical ranges and flat boundary portions.")
    ap.add_argument("--version", action="version", version=f"nilrange {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[tol, out], help="full JSON report")
    p.add_argument("matrix")
    p.add_argument("--only-flats", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("flat-portions", parents=[tol, out], help="alias of analyze --only-flats")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_flat_portions, only_flats=True)

    p = sub.add_parser("boundary", parents=[tol, out], help="boundary samples as CSV or SVG")
    p.add_argument("matrix")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--support-lines", action="store_true")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("kippenhahn", parents=[out], help="quartic coefficients and singular points")
    p.add_argument("matrix")
    p.add_argument("--radius", type=float, default=None)
    p.set_defaults(func=cmd_kippenhahn)

    p = sub.add_parser("construct", parents=[out], help="write a family member as matrix JSON")
    p.add_argument("family", choices=("exceptional", "parallel", "real-family", "reducible5"))
    p.add_argument("--alpha", type=_complex, default=1.0)
    p.add_argument("--a1", type=_complex, default=0.0)
    p.add_argument("--a2", type=_complex, default=0.0)
    p.add_argument("--a3", type=_complex, default=0.0)
    p.add_argument("--theta1", type=float, default=0.0)
    p.add_argument("--theta2", type=float, default=0.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--r1", type=float, default=1.0)
    p.add_argument("--r2", type=float, default=1.0)
    p.add_argument("--r3", type=float, default=1.0)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[tol], help="randomized flat-portion certification")
    p.add_argument("family")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump", default=None, help="reproducer file written on violation")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedMatrix as exc:
        print(f"nilrange: unsupported input: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (MatrixParseError, UsageError, NumRangeError) as exc:
        print(f"nilrange: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
