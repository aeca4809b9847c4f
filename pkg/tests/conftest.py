import numpy as np
import pytest

from polyfourier.geometry import PolytopalRegion, box, convex_hull, polygon


@pytest.fixture
def square():
    return PolytopalRegion.single(box([0, 0], [1, 1]))


@pytest.fixture
def triangle():
    return PolytopalRegion.single(polygon([[0, 0], [1, 0], [0, 1]]))


@pytest.fixture
def cube():
    return PolytopalRegion.single(box([0, 0, 0], [1, 1, 1]))


@pytest.fixture
def two_squares():
    return PolytopalRegion((box([0, 0], [1, 1]), box([1, 0], [2, 1])))


@pytest.fixture
def l_shape():
    return PolytopalRegion((box([0, 0], [1, 1]), box([1, 0], [3, 2])))


def random_triangle(rng):
    while True:
        pts = rng.uniform(-1, 1, (3, 2))
        if abs(np.linalg.det(pts[1:] - pts[0])) > 0.1:
            return PolytopalRegion.single(convex_hull(pts))


def random_quadrilateral(rng):
    while True:
        ang = np.sort(rng.uniform(0, 2 * np.pi, 4))
        if np.diff(np.r_[ang, ang[0] + 2 * np.pi]).min() > 0.4:
            r = rng.uniform(0.5, 1.2, 4)
            pts = np.column_stack([r * np.cos(ang), r * np.sin(ang)])
            try:
                P = convex_hull(pts)
            except Exception:
                continue
            if len(P.vertices) == 4:
                return PolytopalRegion.single(P)


def random_tetrahedron(rng):
    while True:
        pts = rng.uniform(-1, 1, (4, 3))
        if abs(np.linalg.det(pts[1:] - pts[0])) > 0.2:
            return PolytopalRegion.single(convex_hull(pts))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[k])
