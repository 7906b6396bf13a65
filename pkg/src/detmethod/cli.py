"""Command line interface: ``detmethod <command> ...``; results go to stdout as JSON."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .bounds import BoundInputs, full_report
from .heights import ProjPoint, height_comparison, naive_form_height
from .jets import empirical_I, filtration_profile
from .pipeline import ExperimentConfig, determinant_valuation_check, run_experiment
from .slopes import slope_F_D
from .varieties import Hypersurface, enumerate_points, partition_into_classes


def load_variety(spec: str) -> Hypersurface:
    """A JSON file path, or an equation such as ``"x*z - y^2"``."""
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        return Hypersurface.from_json(path)
    return Hypersurface.parse(spec)


def parse_point(text: str) -> ProjPoint:
    text = text.strip().strip("[]")
    sep = ":" if ":" in text else ","
    return ProjPoint(tuple(Fraction(x) for x in text.split(sep)))


def load_points(spec: str) -> List[ProjPoint]:
    path = Path(spec)
    data = json.loads(path.read_text()) if path.exists() else json.loads(spec)
    if isinstance(data, dict):
        data = data["points"]
    return [ProjPoint(tuple(P)) for P in data]


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def cmd_heights(args):
    pts = [parse_point(p) for p in args.point]
    if args.points:
        pts += load_points(args.points)
    out = [height_comparison(P).to_json() for P in pts]
    if args.variety:
        X = load_variety(args.variety)
        _emit({"points": out, "naive_form_height": naive_form_height(X.f)})
    else:
        _emit({"points": out})


def cmd_points_enumerate(args):
    X = load_variety(args.variety)
    pts = enumerate_points(X, Fraction(args.bound))
    _emit({"variety": str(X), "bound": args.bound, "count": len(pts),
           "points": [P.to_json() for P in pts]})


def cmd_points_classes(args):
    X = load_variety(args.variety)
    pts = enumerate_points(X, Fraction(args.bound))
    classes = partition_into_classes(X, pts, args.prime)
    _emit({"variety": str(X), "p": args.prime, "classes": [c.to_json() for c in classes]})


def cmd_jets_profile(args):
    X = load_variety(args.variety)
    P = parse_point(args.point)
    prof = filtration_profile(X, args.degree, P.coords)
    out = prof.to_json()
    out["I_hat"] = str(empirical_I(X, P.coords, args.degree))
    if args.plot:
        from .report import plot_profile

        plot_profile(prof, Path(args.plot))
        out["figure"] = args.plot
    _emit(out)


def cmd_slope(args):
    X = load_variety(args.variety)
    _emit(slope_F_D(X, args.degree).to_json())


def _bound_inputs(X: Hypersurface, args) -> BoundInputs:
    sources = {}
    if args.hX is None:
        h_X = naive_form_height(X.f)
        sources["h_X"] = "naive_form_height"
    else:
        h_X = args.hX
    if args.r_param is None:
        r_param = 1
        sources["r_param"] = "CLI default 1"
    else:
        r_param = args.r_param
    I_value = None if args.I is None else Fraction(args.I)
    return BoundInputs(X.n, X.d, X.delta, Fraction(args.epsilon), float(args.B), h_X=h_X,
                       I_value=I_value, r_param=r_param, sources=sources)


def cmd_bounds(args):
    X = load_variety(args.variety)
    _emit(full_report(_bound_inputs(X, args)).to_json())


def cmd_run(args):
    from .report import write_report

    X = load_variety(args.variety)
    config = ExperimentConfig(
        max_degree=args.max_degree, jobs=args.jobs, h_X=args.hX,
        I_value=None if args.I is None else Fraction(args.I),
        r_param=1 if args.r_param is None else args.r_param,
    )
    report = run_experiment(X, float(Fraction(args.bound)), Fraction(args.epsilon), config)
    written = write_report(report, Path(args.out))
    summary = {k: v for k, v in report.to_json().items() if k not in ("classes",)}
    summary["written"] = [str(p) for p in written]
    _emit(summary)
    return 0 if report.success else 1


def cmd_check_det(args):
    X = load_variety(args.variety)
    pts = load_points(args.points)
    _emit(determinant_valuation_check(X, pts, args.degree, args.prime).to_json())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="detmethod", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("heights", help="classic and Arakelov heights of points")
    p.add_argument("--point", action="append", default=[], help="e.g. 1:2:3 (repeatable)")
    p.add_argument("--points", help="JSON file with a list of coordinate lists")
    p.add_argument("--variety", help="also report the naive height of this form")
    p.set_defaults(func=cmd_heights)

    p = sub.add_parser("points", help="rational points of bounded height")
    psub = p.add_subparsers(dest="points_command", required=True)
    q = psub.add_parser("enumerate")
    q.add_argument("--variety", required=True)
    q.add_argument("--bound", required=True)
    q.set_defaults(func=cmd_points_enumerate)
    q = psub.add_parser("classes")
    q.add_argument("--variety", required=True)
    q.add_argument("--bound", required=True)
    q.add_argument("--prime", type=int, required=True)
    q.set_defaults(func=cmd_points_classes)

    p = sub.add_parser("jets", help="jet filtrations of F_D")
    jsub = p.add_subparsers(dest="jets_command", required=True)
    q = jsub.add_parser("profile")
    q.add_argument("--variety", required=True)
    q.add_argument("--point", required=True)
    q.add_argument("--degree", type=int, required=True)
    q.add_argument("--plot", help="write a bar chart of k_m to this PNG")
    q.set_defaults(func=cmd_jets_profile)

    p = sub.add_parser("slope", help="symmetric slope of F_D")
    p.add_argument("--variety", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_slope)

    def bound_args(q):
        q.add_argument("--epsilon", required=True)
        q.add_argument("--hX", type=float)
        q.add_argument("--I")
        q.add_argument("--r-param", type=int, dest="r_param")

    p = sub.add_parser("bounds", help="explicit constants of the counting theorem")
    p.add_argument("--variety", required=True)
    p.add_argument("--B", required=True, type=float)
    bound_args(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("run", help="end-to-end covering experiment")
    p.add_argument("--variety", required=True)
    p.add_argument("--bound", required=True)
    bound_args(p)
    p.add_argument("--max-degree", type=int, default=8)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check-det", help="p-adic valuation of an interpolation determinant")
    p.add_argument("--variety", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_check_det)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        rc = args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
