"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import math
import sys

import numpy as np
import pytest

from polyfourier import experiments as ex
from polyfourier.cli import main
from polyfourier.curves import (
    AnalyticCurve,
    ComplexCircle,
    RationalCircle,
    RationalCurve,
    TrigCircle,
    affine_hull_containment,
    restrict_bb_to_curve,
    vanishing_polynomial_rank,
)
from polyfourier.errors import NearSingular
from polyfourier.expsum import brownawell_pair_check, cosine_asymptotics, dominant_term, min_modulus_scan, verify_dominance
from polyfourier.geometry import PolytopalRegion, box, generic_projection_check, polygon
from polyfourier.planar import (
    derivative_transform_identity_residual,
    eval_homogeneous,
    polygon_directional_derivative,
    segment_measure_transform,
    vertex_polynomial_sum,
)
from polyfourier.special import bessel_j1_zero, disk_transform_profile
from polyfourier.transform import bb_transform, bb_transform_perturbed, quadrature_transform, transform_limit_at_zero

from conftest import random_quadrilateral, random_tetrahedron, random_triangle

SQUARE = PolytopalRegion.single(box([0, 0], [1, 1]))
TRIANGLE = PolytopalRegion.single(polygon([[0, 0], [1, 0], [0, 1]]))
UNIT = TrigCircle(ComplexCircle([0, 0], 1.0))


LINES = {}


def report(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {detail}"
    LINES[number] = line
    print(line)
    return ok


def test_01_oracle_equivalence():
    rng = np.random.default_rng(2024)
    makers = [random_triangle, random_quadrilateral, random_tetrahedron]
    worst, used, skipped = 0.0, 0, 0
    while used < 100:
        R = makers[(used + skipped) % 3](rng)
        z = rng.uniform(-2, 2, R.dim) + 1j * rng.uniform(-2, 2, R.dim)
        try:
            bb = bb_transform(R, z).value
        except NearSingular:
            skipped += 1
            continue
        q = quadrature_transform(R, z)
        worst = max(worst, abs(bb - q) / (1 + abs(q)))
        used += 1
    ok = worst <= 1e-6
    assert report(1, ok, f"oracle equivalence, 100 pairs ({skipped} singular skipped), max rel diff {worst:.2e} <= 1e-6")


def test_02_closed_forms():
    e_sq = abs(bb_transform_perturbed(SQUARE, [0.5, 0]) - (-2j / math.pi))
    e_tri = abs(bb_transform_perturbed(TRIANGLE, [1, 0]) - (-1j / (2 * math.pi)))
    e_lim = max(abs(transform_limit_at_zero(R) - v) for R, v in ((SQUARE, 1.0), (TRIANGLE, 0.5)))
    ok = e_sq <= 1e-12 and e_tri <= 1e-12 and e_lim <= 1e-6
    assert report(2, ok, f"closed forms: square {e_sq:.1e}, triangle {e_tri:.1e} (<= 1e-12), limit at 0 {e_lim:.1e} (<= 1e-6)")


def test_03_cosine_asymptotics():
    worst_mod, worst_arg = 0.0, 0.0
    for x in (0.0, 1.0, math.pi / 2):
        c = complex(np.cos(complex(x, 20)))
        model, arg = cosine_asymptotics(complex(x, 20))
        worst_mod = max(worst_mod, abs(abs(c) / model - 1))
        d = (math.atan2(c.imag, c.real) - arg + math.pi) % (2 * math.pi) - math.pi
        worst_arg = max(worst_arg, abs(d))
    ok = worst_mod <= 1e-12 and worst_arg <= 1e-12
    assert report(3, ok, f"cosine asymptotics at y=20: modulus {worst_mod:.1e}, argument {worst_arg:.1e} (<= 1e-12)")


def test_04_dominance():
    S = restrict_bb_to_curve(SQUARE, UNIT)
    dom = dominant_term(S)
    rep = verify_dominance(S, np.arange(0.5, 4.0 + 1e-9, 0.25))
    trace = np.array(rep.ratio_trace)
    by4 = trace[trace[:, 0] <= 4 + 1e-12][-1, 1]
    window = trace[(trace[:, 0] >= 2 - 1e-12) & (trace[:, 0] <= 4 + 1e-12), 1]
    ok = (
        tuple(S.frequencies[dom.index]) == (1.0, 1.0)
        and abs(dom.x_star + math.pi / 4) <= 1e-10
        and abs(dom.epsilon - (1 - 1 / math.sqrt(2))) <= 1e-10
        and by4 > 10
        and bool((np.diff(window) > 0).all())
    )
    assert report(
        4, ok,
        f"dominance: vertex {S.frequencies[dom.index].tolist()}, x* {dom.x_star:.12f}, eps {dom.epsilon:.12f}, "
        f"ratio at y=4 {by4:.2e} (> 10), increasing on [2,4]",
    )


def test_05_nonvanishing_scans():
    t_circle = 2 * math.pi * np.arange(4096) / 4096
    sq = min_modulus_scan(restrict_bb_to_curve(SQUARE, UNIT), t_circle).min_modulus
    ls = min_modulus_scan(restrict_bb_to_curve(ex.l_shape(), UNIT), t_circle).min_modulus
    t2 = min_modulus_scan(restrict_bb_to_curve(SQUARE, AnalyticCurve("t2_sin")), np.arange(2048) / 2048).min_modulus
    ok = min(sq, ls, t2) >= 1e-6
    assert report(5, ok, f"scans min |phi|: square {sq:.2e}, L-shape {ls:.2e}, (t^2, sin t) {t2:.2e} (>= 1e-6)")


def test_06_counterexample_contrast():
    j11 = bessel_j1_zero()
    rho = j11 / (2 * math.pi)
    disk = abs(disk_transform_profile(rho))
    circle = TrigCircle(ComplexCircle([0, 0], rho))
    sq = min_modulus_scan(restrict_bb_to_curve(SQUARE, circle), 2 * math.pi * np.arange(4096) / 4096).min_modulus
    ok = abs(j11 - 3.8317059702) <= 1e-8 and disk <= 1e-10 and sq >= 1e-4
    assert report(6, ok, f"j11 = {j11:.10f}, disk profile {disk:.1e} (<= 1e-10), square min {sq:.3f} (>= 1e-4)")


def test_07_planar_identities():
    rng = np.random.default_rng(7)
    worst_id = 0.0
    for k in range(50):
        R = random_triangle(rng) if k % 2 else random_quadrilateral(rng)
        u = rng.normal(size=2)
        x = rng.uniform(-1, 1, 2) + 1j * rng.uniform(-0.5, 0.5, 2)
        worst_id = max(worst_id, derivative_transform_identity_residual(R, u, x, allow_parallel=False))
    mu = polygon_directional_derivative(ex.l_shape(), [1, 2])
    vps = vertex_polynomial_sum(mu)
    worst_hom, worst_sum = 0.0, 0.0
    for _ in range(50):
        lam = rng.uniform(-3, 3)
        x = rng.normal(size=2) + 1j * rng.normal(size=2)
        for p in vps.entries.values():
            a, b = eval_homogeneous(p, lam * x), lam ** vps.degree * eval_homogeneous(p, x)
            worst_hom = max(worst_hom, abs(a - b) / max(abs(b), 1e-300))
        xr = rng.uniform(-2, 2, 2)
        rhs = np.prod([2j * math.pi * (w @ xr) for w in mu.directions]) * segment_measure_transform(mu, xr)
        worst_sum = max(worst_sum, abs(vps.evaluate(xr) - rhs))
    ok = worst_id <= 1e-8 and worst_hom <= 1e-10 and worst_sum <= 1e-8
    assert report(7, ok, f"planar: identity {worst_id:.1e} (<= 1e-8), homogeneity {worst_hom:.1e} (<= 1e-10), vertex sum {worst_sum:.1e} (<= 1e-8)")


def test_08_curve_classification():
    line = affine_hull_containment(RationalCurve([[0, 1], [1, 2]]))
    normal_ok = line.contained and np.allclose(line.normal, [1, -0.5], rtol=0, atol=1e-9)
    circle_ok = not affine_hull_containment(RationalCircle(ComplexCircle([0, 0], 1.0))).contained
    cubic_ok = not affine_hull_containment(RationalCurve([[0, 1], [0, 0, 1], [0, 0, 0, 1]])).contained
    parabola = vanishing_polynomial_rank(RationalCurve([[0, 1], [0, 0, 1]]), 2)
    t2 = vanishing_polynomial_rank(AnalyticCurve("t2_sin"), 5)
    ok = normal_ok and circle_ok and cubic_ok and parabola <= 1e-10 and t2 >= 1e-6
    assert report(
        8, ok,
        f"curves: line normal {normal_ok}, rational circle {circle_ok}, twisted cubic {cubic_ok}, "
        f"parabola rank {parabola:.1e} (<= 1e-10), (t^2, sin t) degree-5 rank {t2:.1e} (>= 1e-6)",
    )


def test_09_brownawell_vs_projection():
    rng = np.random.default_rng(9)
    mismatches = 0
    with_collisions = 0
    for k in range(50):
        v = rng.integers(-2, 3, (8, 3)).astype(float)
        a, b = sorted(rng.choice(3, 2, replace=False))
        curve = TrigCircle(ComplexCircle(rng.normal(size=3), complex(*rng.normal(size=2)), plane=(a, b)))
        flagged = {(p.k, p.l) for p in brownawell_pair_check(curve, v)}
        check = generic_projection_check(v[:, [a, b, 3 - a - b]])
        collisions = set(map(tuple, check.collisions))
        mismatches += flagged != collisions
        with_collisions += bool(collisions)
    ok = mismatches == 0
    assert report(9, ok, f"Brownawell pairs equal projection collisions on 50 sets ({with_collisions} with collisions), {mismatches} mismatches")


def test_10_determinism(tmp_path):
    for name in ("a", "b"):
        assert main(["pompeiu-demo", "--seed", "10", "--out", str(tmp_path / name)]) == 0
    ok = (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()
    assert report(10, ok, "pompeiu-demo report.json byte-identical across two runs with --seed 10")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
