import math

import numpy as np
import pytest

from polyfourier.curves import (
    AnalyticCurve,
    ComplexCircle,
    RationalCircle,
    RationalCurve,
    Reparametrized,
    TrigCircle,
    affine_hull_containment,
    builtin_curve,
    circle_point_rational,
    circle_point_trig,
    restrict_bb_to_curve,
    sphere_membership,
    vanishing_polynomial_rank,
)
from polyfourier.errors import PoleAtParameter, UnknownName
from polyfourier.geometry import PolytopalRegion, box
from polyfourier.transform import bb_transform

UNIT = ComplexCircle([0, 0], 1.0)


def line():
    return RationalCurve([[0, 1], [1, 2]])


def twisted_cubic():
    return RationalCurve([[0, 1], [0, 0, 1], [0, 0, 0, 1]])


def test_trig_circle_points():
    np.testing.assert_allclose(circle_point_trig(UNIT, 0), [1, 0])
    z = circle_point_trig(UNIT, 1j)
    np.testing.assert_allclose(z, [math.cosh(1), 1j * math.sinh(1)])
    assert abs(z[0] ** 2 + z[1] ** 2 - 1) < 1e-14
    C = ComplexCircle([1, 2], 2j)
    np.testing.assert_allclose(circle_point_trig(C, math.pi / 2), [1, 2 + 2j], atol=1e-15)


def test_rational_circle_points():
    C = ComplexCircle([0.5, -1], 2.0)
    np.testing.assert_allclose(circle_point_rational(C, 0), [2.5, -1])
    np.testing.assert_allclose(circle_point_rational(C, 1), [0.5, 1])
    with pytest.raises(PoleAtParameter):
        circle_point_rational(C, 1j)


def test_sphere_membership():
    rng = np.random.default_rng(3)
    C = ComplexCircle([0.3 - 0.1j, 1.2], 0.8 + 0.6j)
    t = rng.normal(size=100) + 1j * rng.normal(size=100)
    for pts in (circle_point_trig(C, t), circle_point_rational(C, t)):
        assert np.abs(sphere_membership(C.center, C.radius, pts)).max() <= 1e-10
    assert sphere_membership(C.center, C.radius, C.center) == pytest.approx(-C.radius ** 2)
    C3 = ComplexCircle([0, 0, 0], 1.5)
    assert sphere_membership(C3.center, C3.radius, [0, 0, 1.5]) == 0


def test_line_contained_with_normal():
    v = affine_hull_containment(line())
    assert v.contained
    # 2x - y = -1, normal scaled so its largest entry is 1
    np.testing.assert_allclose(v.normal, [1, -0.5], atol=1e-9)
    assert v.offset == pytest.approx(-0.5, abs=1e-9)


@pytest.mark.parametrize("curve", [RationalCircle(UNIT), twisted_cubic(), AnalyticCurve("t2_sin"), TrigCircle(UNIT)])
def test_not_contained(curve):
    assert not affine_hull_containment(curve).contained


def test_twisted_cubic_four_sample_determinant():
    t = np.array([0.1, 0.4, 0.7, 0.9])
    pts = twisted_cubic()(t)
    M = np.column_stack([np.ones(4), pts.real])
    # Vandermonde determinant prod (t_j - t_i)
    expected = np.prod([t[j] - t[i] for i in range(4) for j in range(i + 1, 4)])
    assert np.linalg.det(M) == pytest.approx(expected, rel=1e-12)


def test_verdict_invariant_under_affine_reparametrization():
    rng = np.random.default_rng(4)
    for _ in range(20):
        a = rng.uniform(0.3, 2) * rng.choice([-1, 1])
        b = rng.uniform(-1, 1)
        for curve in (line(), RationalCircle(UNIT), twisted_cubic()):
            assert affine_hull_containment(Reparametrized(curve, a, b)).contained == affine_hull_containment(curve).contained


def test_real_curves_not_in_real_hyperplane():
    for curve in (RationalCurve([[0, 1], [0, 0, 1]]), RationalCurve([[0, 1], [0, 0, 0, 1]])):
        assert not affine_hull_containment(curve).contained


def test_builtin_t2_sin():
    g = builtin_curve("t2_sin")
    np.testing.assert_allclose(g(0.0), [0, 0])
    np.testing.assert_allclose(g(math.pi / 2), [math.pi ** 2 / 4, 1])
    assert g.order == 1
    with pytest.raises(UnknownName):
        builtin_curve("spiral")


def test_vanishing_rank_algebraic_curves():
    assert vanishing_polynomial_rank(RationalCurve([[0, 1], [0, 0, 1]]), 2) <= 1e-10
    assert vanishing_polynomial_rank(TrigCircle(UNIT), 2, interval=(0, 2 * math.pi)) <= 1e-10


def test_vanishing_rank_t2_sin_low_degree():
    # no polynomial relation of degree 2 holds on (t^2, sin t)
    assert vanishing_polynomial_rank(AnalyticCurve("t2_sin"), 2) >= 1e-6


def test_restriction_terms(square):
    S = restrict_bb_to_curve(square, TrigCircle(UNIT))
    assert len(S) == 4
    assert {tuple(v) for v in S.frequencies} == {(0, 0), (1, 0), (0, 1), (1, 1)}
    t = 0.37
    assert abs(S.evaluate(t) - bb_transform(square, circle_point_trig(UNIT, t)).value) < 1e-10


def test_restriction_merges_shared_vertex():
    R = PolytopalRegion((box([0, 0], [1, 1]), box([1, 1], [2, 2])))
    assert len(restrict_bb_to_curve(R, TrigCircle(UNIT))) == 7


def test_restriction_matches_transform_random_parameters(l_shape):
    rng = np.random.default_rng(5)
    C = ComplexCircle([0.2, -0.3 + 0.1j], 0.7 - 0.4j)
    S = restrict_bb_to_curve(l_shape, TrigCircle(C))
    for t in rng.uniform(0, 2 * math.pi, 50) + 1j * rng.uniform(-0.5, 0.5, 50):
        ref = bb_transform(l_shape, circle_point_trig(C, t)).value
        assert abs(S.evaluate(t) - ref) <= 1e-10 * max(1, abs(ref))
