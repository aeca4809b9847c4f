import math

import numpy as np
import pytest

from polyfourier.curves import ComplexCircle
from polyfourier.errors import DirectionParallelToEdge, InputError
from polyfourier.geometry import PolytopalRegion, box
from polyfourier.planar import (
    Segment,
    SegmentMeasure,
    derivative_transform_identity_residual,
    eval_homogeneous,
    homogeneous_circle_vanishing_check,
    polygon_directional_derivative,
    segment_kernel,
    segment_measure_transform,
    vertex_polynomial_sum,
)

from conftest import random_triangle

S2 = 1 / math.sqrt(2)


def seg_map(mu):
    return {(tuple(s.a), tuple(s.b)): s.c for s in mu.segments}


def test_square_derivative_along_x(square):
    mu = polygon_directional_derivative(square, [1, 0], allow_parallel=True)
    assert seg_map(mu) == {((0.0, 0.0), (0.0, 1.0)): 1, ((1.0, 0.0), (1.0, 1.0)): -1}


def test_square_derivative_diagonal(square):
    mu = polygon_directional_derivative(square, [1, 1])
    coeffs = seg_map(mu)
    assert len(coeffs) == 4
    assert sorted(np.round([c.real for c in coeffs.values()], 12)) == [-round(S2, 12)] * 2 + [round(S2, 12)] * 2


def test_parallel_direction_rejected(square):
    with pytest.raises(DirectionParallelToEdge):
        polygon_directional_derivative(square, [1, 0])


def test_shared_edge_cancels(two_squares):
    mu = polygon_directional_derivative(two_squares, [1, 0.3])
    assert all(not np.allclose([s.a[0], s.b[0]], 1) for s in mu.segments)


def test_segment_transform_examples():
    mu = SegmentMeasure((Segment([0, 0], [1, 0], 1),))
    assert abs(segment_measure_transform(mu, [0.5, 0]) - (-2j / math.pi)) < 1e-14
    assert abs(segment_measure_transform(mu, [1, 0])) < 1e-14
    assert segment_measure_transform(mu, [0, 1]) == pytest.approx(1)


def test_kernel_taylor_branch_is_continuous():
    s = np.array([1e-4 * (1 - 1e-9), 1e-4 * (1 + 1e-9)]) / (2 * math.pi)
    a, b = segment_kernel(s)
    assert abs(a - b) < 1e-12
    assert segment_kernel(0) == 1


def test_identity_square(square):
    assert derivative_transform_identity_residual(square, [1, 0], [0.3, 0.7]) <= 1e-8
    # u . x = 0: the right side vanishes
    mu = polygon_directional_derivative(square, [1, 0], allow_parallel=True)
    assert abs(segment_measure_transform(mu, [0, 0.7])) <= 1e-8


def test_identity_random_triangles():
    rng = np.random.default_rng(12)
    for _ in range(50):
        R = random_triangle(rng)
        u = rng.normal(size=2)
        x = rng.uniform(-1, 1, 2) + 1j * rng.uniform(-0.5, 0.5, 2)
        assert derivative_transform_identity_residual(R, u, x, allow_parallel=False) <= 1e-8


def test_single_segment_vertex_sum():
    mu = SegmentMeasure((Segment([0, 0], [1, 0], 1),))
    vps = vertex_polynomial_sum(mu)
    assert vps.degree == 0
    assert set(vps.entries) == {(0.0, 0.0), (1.0, 0.0)}
    assert vps.entries[(0.0, 0.0)][0] == 1
    assert vps.entries[(1.0, 0.0)][0] == -1


def test_square_vertex_sum_homogeneous(square):
    mu = polygon_directional_derivative(square, [1, 1])
    vps = vertex_polynomial_sum(mu)
    assert len(vps.entries) == 4 and vps.degree == 1
    rng = np.random.default_rng(13)
    for p in vps.entries.values():
        for _ in range(20):
            lam = rng.uniform(-3, 3)
            x = rng.normal(size=2) + 1j * rng.normal(size=2)
            a, b = eval_homogeneous(p, lam * x), lam ** vps.degree * eval_homogeneous(p, x)
            assert abs(a - b) <= 1e-10 * max(abs(b), 1e-300)


def test_vertex_sum_matches_product_formula(l_shape):
    mu = polygon_directional_derivative(l_shape, [1, 2])
    vps = vertex_polynomial_sum(mu)
    rng = np.random.default_rng(14)
    for _ in range(50):
        x = rng.uniform(-1, 1, 2)
        rhs = np.prod([2j * math.pi * (u @ x) for u in mu.directions]) * segment_measure_transform(mu, x)
        assert abs(vps.evaluate(x) - rhs) <= 1e-8


def test_linearity():
    a = SegmentMeasure((Segment([0, 0], [1, 0.5], 1.5),))
    b = SegmentMeasure((Segment([0.2, 1], [0, 0], -0.5j),))
    x = np.array([0.3 + 0.1j, -0.4])
    assert abs(segment_measure_transform(a.scaled(2 - 1j), x) - (2 - 1j) * segment_measure_transform(a, x)) <= 1e-12
    assert abs(segment_measure_transform(a + b, x) - segment_measure_transform(a, x) - segment_measure_transform(b, x)) <= 1e-12


def test_segment_transform_entire():
    mu = SegmentMeasure((Segment([0, 0], [1, 0.5], 1.0), Segment([1, 0.5], [0, 1], 2j)))
    x = np.array([0.3 + 0.2j, -0.6 + 0.1j])
    h = 1e-5
    for k in range(2):
        e = np.zeros(2)
        e[k] = h
        dx = (segment_measure_transform(mu, x + e) - segment_measure_transform(mu, x - e)) / (2 * h)
        dy = (segment_measure_transform(mu, x + 1j * e) - segment_measure_transform(mu, x - 1j * e)) / (2 * h)
        assert abs(dy - 1j * dx) <= 1e-6


def test_derivative_measure_positive_on_circles(square):
    u = np.array([1.0, 1.0]) / math.sqrt(2)
    mu = polygon_directional_derivative(square, u)
    t = 2 * math.pi * np.arange(1024) / 1024
    for R in (0.5, 1.0, 1.7):
        x = R * np.column_stack([np.cos(t), np.sin(t)])
        vals = np.array([abs(segment_measure_transform(mu, p)) for p in x])
        # the factor u.x forces isolated zeros; everywhere else the transform is nonzero
        forced = np.abs(x @ u) < 1e-12
        assert forced.sum() == 2
        assert vals[~forced].min() > 0
        assert vals[forced].max() < 1e-12


def test_homogeneous_circle_check():
    C = ComplexCircle([0, 0], 1.0)
    assert homogeneous_circle_vanishing_check([1, 0], C) == pytest.approx(1)
    assert homogeneous_circle_vanishing_check([1, 0, 1], C) == pytest.approx(1)
    assert homogeneous_circle_vanishing_check([1, 0, 1], C, imag_part=0.4) > 0
    with pytest.raises(InputError):
        homogeneous_circle_vanishing_check([0, 0], C)
