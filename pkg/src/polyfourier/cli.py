"""Command line entry point: ``polyfourier <command> ...``.

Exit status is 0 when every asserted threshold passes, 2 when one fails and
1 on bad input.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import experiments as ex
from .errors import InputError, NearSingular, PolyFourierError
from .inputs import load_circle, load_curve, load_region, parse_complex, parse_real
from .planar import (
    derivative_transform_identity_residual,
    polygon_directional_derivative,
    segment_measure_transform,
    vertex_polynomial_sum,
)
from .curves import ComplexCircle
from .transform import bb_transform, bb_transform_perturbed, quadrature_transform

ORACLE_TOL = 1e-6
PLANAR_TOL = 1e-8


def parse_points(text: str, dim: int) -> list:
    """``"re,im;re,im|re,im;re,im"``: coordinates split by ``;``, points by ``|``."""
    points = []
    for chunk in text.split("|"):
        coords = []
        for c in chunk.split(";"):
            parts = [p.strip() for p in c.split(",")]
            if len(parts) == 1:
                coords.append(parse_complex(parts[0]))
            elif len(parts) == 2:
                coords.append(parse_complex(parts))
            else:
                raise InputError(f"cannot parse coordinate {c!r}")
        if len(coords) != dim:
            raise InputError(f"point {chunk!r} has {len(coords)} coordinates, region has dimension {dim}")
        points.append(np.array(coords))
    return points


def parse_vector(text: str) -> np.ndarray:
    return np.array([parse_real(x.strip()) for x in text.split(",")])


def _circle_arg(path, dim):
    if path is None:
        return ComplexCircle(np.zeros(dim), 1.0)
    return load_circle(path, dim)


def _transform_eval(args):
    region = load_region(args.region)
    rows = []
    entries = []
    passed = True
    for z in parse_points(args.z, region.dim):
        res = bb_transform(region, z, on_singular="flag")
        entry = {"z": z, "min_denominator_factor": res.min_denominator_factor, "singular": res.singular_flag}
        value = res.value
        if res.singular_flag:
            value = bb_transform_perturbed(region, z)
            entry["value_method"] = "circle_mean"
        else:
            entry["value_method"] = "vertex_cones"
        entry["value"] = value
        oracle = np.nan
        if args.oracle:
            oracle = quadrature_transform(region, z)
            rel = abs(value - oracle) / (1 + abs(oracle))
            entry.update(oracle=oracle, relative_difference=rel, agrees=bool(rel <= ORACLE_TOL))
            passed &= rel <= ORACLE_TOL
        entries.append(entry)
        rows.append([*np.ravel([[c.real, c.imag] for c in z]), value.real, value.imag,
                     complex(oracle).real, complex(oracle).imag])
    header = [f"z{k}_{p}" for k in range(region.dim) for p in ("re", "im")]
    header += ["value_re", "value_im", "oracle_re", "oracle_im"]
    report = {"command": "transform eval", "points": entries, "passed": bool(passed)}
    return report, header, rows


def _circle_scan(args):
    region = load_region(args.region)
    circle = _circle_arg(args.circle, region.dim)
    return ex.circle_scan(region, circle, n=args.grid or 4096)


def _scan(args):
    region = load_region(args.region)
    curve = load_curve(args.curve, region.dim)
    return ex.curve_scan(region, curve, n=args.grid or 4096)


def _dominance(args):
    region = load_region(args.region)
    circle = _circle_arg(args.circle, region.dim)
    if not (np.isfinite(args.ymax) and args.ymax > 0.5):
        raise InputError("--ymax must be a finite number above 0.5")
    return ex.dominance_experiment(region, circle, ymax=args.ymax)


def _planar_reduce(args):
    region = load_region(args.region)
    u = parse_vector(args.direction)
    mu = polygon_directional_derivative(region, u, allow_parallel=args.allow_parallel)
    vps = vertex_polynomial_sum(mu)
    rng = np.random.default_rng(args.seed)
    n = args.grid or 8
    rows = []
    worst_identity = 0.0
    worst_product = 0.0
    for _ in range(n):
        x = rng.uniform(-2, 2, 2)
        r1 = derivative_transform_identity_residual(region, u, x, allow_parallel=True)
        lhs = vps.evaluate(x)
        rhs = np.prod([2j * np.pi * (w @ x) for w in mu.directions]) * segment_measure_transform(mu, x)
        r2 = abs(lhs - rhs)
        worst_identity = max(worst_identity, r1)
        worst_product = max(worst_product, r2)
        rows.append([x[0].real, x[0].imag, x[1].real, x[1].imag, r1, r2])
    report = {
        "command": "planar reduce",
        "direction": u / np.linalg.norm(u),
        "segment_measure": mu.as_dict(),
        "vertex_polynomial_sum": vps.as_dict(),
        "max_derivative_identity_residual": worst_identity,
        "max_vertex_sum_residual": worst_product,
        "tolerance": PLANAR_TOL,
        "passed": bool(max(worst_identity, worst_product) <= PLANAR_TOL),
    }
    return report, ["x1_re", "x1_im", "x2_re", "x2_im", "identity_residual", "vertex_sum_residual"], rows


def _curve_check(args):
    region = load_region(args.region)
    curve = load_curve(args.curve, region.dim)
    return ex.curve_check(region, curve, n=args.grid or 2048)


def _pompeiu_demo(args):
    region = load_region(args.region) if args.region else None
    return ex.pompeiu_demo(seed=args.seed, region=region, n_real=args.grid or 4096)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyfourier", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, region=True):
        p.add_argument("--region", required=region, help="region JSON file")
        p.add_argument("--grid", type=int, default=None, help="number of grid points")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="directory for report.json and trace.csv")
        return p

    transform = sub.add_parser("transform", help="evaluate the transform").add_subparsers(dest="action", required=True)
    p = common(transform.add_parser("eval"))
    p.add_argument("--z", required=True, help='frequencies, e.g. "0.5,0;0,0|1;2"')
    p.add_argument("--oracle", action="store_true", help="compare against adaptive quadrature")
    p.set_defaults(func=_transform_eval)

    circle = sub.add_parser("circle", help="scans on a complex circle").add_subparsers(dest="action", required=True)
    p = common(circle.add_parser("scan"))
    p.add_argument("--circle", default=None, help="circle JSON file (default: unit circle at 0)")
    p.set_defaults(func=_circle_scan)

    p = common(sub.add_parser("scan", help="min-modulus scan along any curve"))
    p.add_argument("--curve", required=True, help="curve JSON file")
    p.set_defaults(func=_scan)

    p = common(sub.add_parser("dominance", help="dominant-term growth along a vertical line"))
    p.add_argument("--circle", default=None)
    p.add_argument("--ymax", type=float, default=4.0)
    p.set_defaults(func=_dominance)

    planar = sub.add_parser("planar", help="segment-measure reduction").add_subparsers(dest="action", required=True)
    p = common(planar.add_parser("reduce"))
    p.add_argument("--direction", required=True, help="u1,u2")
    p.add_argument("--allow-parallel", action="store_true", help="accept a direction parallel to an edge")
    p.set_defaults(func=_planar_reduce)

    curve = sub.add_parser("curve", help="curve hypotheses and scan").add_subparsers(dest="action", required=True)
    p = common(curve.add_parser("check"))
    p.add_argument("--curve", required=True)
    p.set_defaults(func=_curve_check)

    p = common(sub.add_parser("pompeiu-demo", help="disk versus polygon on the vanishing sphere"), region=False)
    p.set_defaults(func=_pompeiu_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "grid", None) is not None and args.grid < 2:
        print("error: --grid must be at least 2", file=sys.stderr)
        return 1
    try:
        report, header, rows = args.func(args)
    except (InputError, OSError, KeyError, NearSingular) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PolyFourierError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        ex.write_outputs(args.out, report, header, rows)
    sys.stdout.write(ex.dumps(report))
    return 0 if report.get("passed", True) else 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
