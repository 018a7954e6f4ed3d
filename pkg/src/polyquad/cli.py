"""Command-line interface.

Exit codes: 0 ok, 2 parse error, 3 non-convergence, 4 geometry error.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from polyquad.errors import ConvergenceError, MeshError, OFFParseError
from polyquad.experiments import bench, exactness_trials, function_errors, sample_functions
from polyquad.geometry import BoundingBox, bounding_box, read_off
from polyquad.moments import polyhedron_moments
from polyquad.tchakaloff import (
    TchakaloffConfig,
    format_rule_csv,
    format_rule_json,
    integrate,
    load_rule,
    tetra_free_rule,
    verify_exactness,
)
from polyquad.tetra_rules import compress_rule, fan_tetrahedralize, tetra_based_rule

EXIT_OK, EXIT_PARSE, EXIT_CONVERGENCE, EXIT_GEOMETRY = 0, 2, 3, 4


def _triple(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    return np.array(vals)


def _degrees(text):
    """``5``, ``1:10`` (inclusive) or ``1,3,5``."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree list {text!r}")


def _config(args):
    return TchakaloffConfig(
        eps=args.eps,
        theta=args.theta,
        k0_factor=args.k0_factor,
        source=args.source,
        seed=args.seed,
        max_refinements=args.max_refine,
    )


def _emit(text, output):
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _emit_rule(rule, args):
    text = format_rule_json(rule) if args.output == "json" else format_rule_csv(rule)
    _emit(text, args.out)


def _summary(rule, elapsed, args):
    stream = sys.stderr if args.out in (None, "-") else sys.stdout
    print(
        f"degree={rule.degree} cardinality={rule.cardinality} "
        f"residual={rule.residual:.3e} elapsed={elapsed:.3f}s",
        file=stream,
    )


def cmd_moments(args):
    mom = polyhedron_moments(read_off(args.mesh), args.degree, reproducible_sum=args.reproducible_sum)
    lines = ["alpha1,alpha2,alpha3,gamma"]
    for (a1, a2, a3), g in zip(mom.spec.indices, mom.gamma):
        lines.append(f"{a1},{a2},{a3},{g:.17g}")
    _emit("\n".join(lines) + "\n", args.out)


def cmd_rule(args):
    mesh = read_off(args.mesh)
    t0 = time.perf_counter()
    rule = tetra_free_rule(mesh, args.degree, _config(args))
    _emit_rule(rule, args)
    _summary(rule, time.perf_counter() - t0, args)


def cmd_tet_rule(args):
    mesh = read_off(args.mesh)
    t0 = time.perf_counter()
    tets = fan_tetrahedralize(mesh, args.center)
    if args.export_tets:
        Path(args.export_tets).write_text(tets.to_csv())
    rule = tetra_based_rule(tets, args.degree)
    if args.compress:
        rule = compress_rule(rule, args.degree, bounding_box(mesh), args.eps)
    _emit_rule(rule, args)
    _summary(rule, time.perf_counter() - t0, args)


def cmd_compress(args):
    rule = load_rule(args.rule)
    n = rule.degree if args.degree is None else args.degree
    box = bounding_box(read_off(args.mesh)) if args.mesh else BoundingBox.from_points(rule.nodes)
    t0 = time.perf_counter()
    out = compress_rule(rule, n, box, args.eps)
    _emit_rule(out, args)
    _summary(out, time.perf_counter() - t0, args)


def cmd_verify(args):
    rule = load_rule(args.rule)
    res = verify_exactness(rule, read_off(args.mesh), args.degree)
    print(f"{res:.6e}")
    return EXIT_OK if res < args.eps else EXIT_CONVERGENCE


def cmd_integrate(args):
    rule = load_rule(args.rule)
    if args.function == "one":
        f = lambda x, y, z: np.ones_like(x)
    else:
        f = sample_functions(args.p0)[args.function]
    print(f"{integrate(rule, f):.17g}")


def cmd_trials(args):
    report = exactness_trials(
        read_off(args.mesh), args.degrees, args.trials, args.seed, _config(args), args.center
    )
    _emit(report.to_csv(), args.out)


def cmd_testfuncs(args):
    report = function_errors(read_off(args.mesh), args.degrees, args.p0, _config(args), args.center)
    _emit(report.to_csv(), args.out)


def cmd_bench(args):
    report = bench(read_off(args.mesh), args.degrees, _config(args))
    _emit(report.to_csv(), args.out)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="polyquad",
        description="Positive interior quadrature rules on polyhedra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    construction = argparse.ArgumentParser(add_help=False)
    construction.add_argument("--eps", type=float, default=1e-14)
    construction.add_argument("--theta", type=float, default=4.0)
    construction.add_argument("--k0-factor", type=float, default=8.0)
    construction.add_argument("--source", choices=("halton", "random"), default="halton")
    construction.add_argument("--seed", type=int, default=0)
    construction.add_argument("--max-refine", type=int, default=12)

    rule_out = argparse.ArgumentParser(add_help=False)
    rule_out.add_argument("--output", choices=("csv", "json"), default="csv")
    rule_out.add_argument("-o", "--out", help="output file (default stdout)")

    plain_out = argparse.ArgumentParser(add_help=False)
    plain_out.add_argument("-o", "--out", help="output file (default stdout)")

    p = sub.add_parser("moments", parents=[plain_out], help="Chebyshev moments as CSV")
    p.add_argument("mesh")
    p.add_argument("-n", "--degree", type=int, required=True)
    p.add_argument("--reproducible-sum", action="store_true")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("rule", parents=[construction, rule_out], help="tetrahedra-free rule")
    p.add_argument("mesh")
    p.add_argument("-n", "--degree", type=int, required=True)
    p.set_defaults(func=cmd_rule)

    p = sub.add_parser("tet-rule", parents=[rule_out], help="tetrahedra-based rule")
    p.add_argument("mesh")
    p.add_argument("-n", "--degree", type=int, required=True)
    p.add_argument("--center", type=_triple, help="star center x,y,z")
    p.add_argument("--compress", action="store_true")
    p.add_argument("--eps", type=float, default=1e-14)
    p.add_argument("--export-tets", help="write the tetrahedra as CSV")
    p.set_defaults(func=cmd_tet_rule)

    p = sub.add_parser("compress", parents=[rule_out], help="compress an existing rule")
    p.add_argument("rule")
    p.add_argument("-n", "--degree", type=int)
    p.add_argument("--mesh", help="take the basis box from this mesh")
    p.add_argument("--eps", type=float, default=1e-14)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("verify", help="relative moment residual of a rule")
    p.add_argument("rule")
    p.add_argument("mesh")
    p.add_argument("-n", "--degree", type=int)
    p.add_argument("--eps", type=float, default=1e-14)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrate", help="apply a rule to a test function")
    p.add_argument("rule")
    p.add_argument("--func", dest="function", choices=("one", "f1", "f2", "f3"), default="one")
    p.add_argument("--p0", type=_triple, default=np.zeros(3))
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("trials", parents=[construction, plain_out], help="random polynomial trials")
    p.add_argument("mesh")
    p.add_argument("-n", "--degree", dest="degrees", type=_degrees, default=_degrees("1:10"))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--center", type=_triple)
    p.set_defaults(func=cmd_trials)

    p = sub.add_parser("testfuncs", parents=[construction, plain_out], help="test-function errors")
    p.add_argument("mesh")
    p.add_argument("-n", "--degree", dest="degrees", type=_degrees, default=_degrees("1:10"))
    p.add_argument("--p0", type=_triple, default=np.array([1.5, 1.5, 1.5]))
    p.add_argument("--center", type=_triple)
    p.set_defaults(func=cmd_testfuncs)

    p = sub.add_parser("bench", parents=[construction, plain_out], help="per-phase timings")
    p.add_argument("mesh")
    p.add_argument("-n", "--degree", dest="degrees", type=_degrees, default=_degrees("1:10"))
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except OFFParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except MeshError as exc:
        print(f"geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
