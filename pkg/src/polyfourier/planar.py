"""Planar reduction to measures on line segments.

Differentiating the indicator of a polygonal region along a direction ``u``
gives a complex combination of arc-length measures on its edges. Applying one
more derivative per distinct edge direction turns every segment into a pair
of point masses, whose transform is a vertex sum with homogeneous polynomial
coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import ComplexCircle, circle_point_trig
from .errors import DirectionParallelToEdge, InputError
from .geometry import PolytopalRegion, Polytope
from .transform import TWO_PI_I, bb_transform

TAYLOR_SWITCH = 1e-4
PARALLEL_TOL = 1e-9


def _key(p, ndigits=12):
    return tuple(round(float(x), ndigits) + 0.0 for x in p)


@dataclass(frozen=True, eq=False)
class Segment:
    a: np.ndarray
    b: np.ndarray
    c: complex

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float)
        if a.shape != (2,) or b.shape != (2,):
            raise InputError("segment endpoints must be 2-vectors")
        if np.allclose(a, b, rtol=0, atol=1e-15):
            raise InputError("segment endpoints coincide")
        if complex(self.c) == 0:
            raise InputError("segment coefficient must be nonzero")
        # canonical orientation: a precedes b lexicographically
        if tuple(b) < tuple(a):
            a, b = b, a
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", complex(self.c))

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))

    @property
    def direction(self) -> np.ndarray:
        return (self.b - self.a) / self.length


def _direction_set(segments):
    """Distinct unit directions (antipodes identified), sorted by angle in [-pi/2, pi/2)."""
    dirs = []
    for s in segments:
        u = s.direction
        if not any(abs(u[0] * w[1] - u[1] * w[0]) < PARALLEL_TOL for w in dirs):
            dirs.append(u)
    dirs.sort(key=lambda w: math.atan2(w[1], w[0]))
    return tuple(dirs)


@dataclass(frozen=True, eq=False)
class SegmentMeasure:
    segments: tuple
    directions: tuple = field(init=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "directions", _direction_set(segs))

    def __len__(self):
        return len(self.segments)

    def scaled(self, c) -> "SegmentMeasure":
        return SegmentMeasure(tuple(Segment(s.a, s.b, s.c * c) for s in self.segments))

    def __add__(self, other: "SegmentMeasure") -> "SegmentMeasure":
        return SegmentMeasure(self.segments + other.segments)

    def direction_index(self, u) -> int:
        for k, w in enumerate(self.directions):
            if abs(u[0] * w[1] - u[1] * w[0]) < PARALLEL_TOL:
                return k
        raise KeyError("direction not in the measure's direction set")

    def as_dict(self):
        return {
            "segments": [
                {"a": s.a.tolist(), "b": s.b.tolist(), "c": [s.c.real, s.c.imag]} for s in self.segments
            ],
            "directions": [u.tolist() for u in self.directions],
        }


def _polygon_boundary(P: Polytope):
    """Boundary edges of a convex polygon with outward unit normals."""
    centre = P.vertices.mean(axis=0)
    out = []
    for i, j in P.edges:
        a, b = P.vertices[i], P.vertices[j]
        t = b - a
        n = np.array([t[1], -t[0]]) / np.linalg.norm(t)
        if n @ ((a + b) / 2 - centre) < 0:
            n = -n
        out.append((a, b, n))
    return out


def polygon_directional_derivative(region, u, allow_parallel=False) -> SegmentMeasure:
    """``d/du`` of the region's indicator as a segment measure.

    Each boundary edge with outward normal ``n`` carries ``-(u . n)`` times
    arc length. Edges shared by two parts with opposite normals cancel. By
    default ``u`` must not be parallel to any edge; with ``allow_parallel``
    the edges with ``u . n = 0`` are simply absent.
    """
    if isinstance(region, Polytope):
        region = PolytopalRegion.single(region)
    if region.dim != 2:
        raise InputError("planar reduction needs a 2-D region")
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    acc = {}
    for part in region.parts:
        for a, b, n in _polygon_boundary(part):
            t = (b - a) / np.linalg.norm(b - a)
            if abs(u[0] * t[1] - u[1] * t[0]) < PARALLEL_TOL and not allow_parallel:
                raise DirectionParallelToEdge(f"direction {u.tolist()} is parallel to edge {a.tolist()} -> {b.tolist()}")
            key = tuple(sorted((_key(a), _key(b))))
            coeff, ends = acc.get(key, (0.0, (a, b)))
            acc[key] = (coeff - float(u @ n), ends)
    segments = [Segment(a, b, c) for c, (a, b) in acc.values() if abs(c) > 1e-12]
    segments.sort(key=lambda s: (tuple(s.a), tuple(s.b)))
    return SegmentMeasure(tuple(segments))


def segment_kernel(s):
    """``E(s) = (exp(-2 pi i s) - 1) / (-2 pi i s)`` with ``E(0) = 1``."""
    s = np.asarray(s, dtype=complex)
    w = -TWO_PI_I * s
    small = np.abs(w) < TAYLOR_SWITCH
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.expm1(w) / w
    taylor = 1 + w / 2 + w * w / 6 + w ** 3 / 24
    return np.where(small, taylor, direct)


def segment_measure_transform(mu: SegmentMeasure, x) -> complex:
    """Fourier-Laplace transform of ``sum c_j * arclength(I_j)`` at complex ``x``."""
    x = np.asarray(x, dtype=complex)
    total = 0j
    for s in mu.segments:
        total += s.c * s.length * np.exp(-TWO_PI_I * (s.a @ x)) * segment_kernel((s.b - s.a) @ x)
    return complex(total)


def derivative_transform_identity_residual(region, u, x, allow_parallel=True) -> float:
    """``|FT(d_u 1_R)(x) - 2 pi i (u . x) F_R(x)|``."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    x = np.asarray(x, dtype=complex)
    mu = polygon_directional_derivative(region, u, allow_parallel=allow_parallel)
    lhs = segment_measure_transform(mu, x)
    rhs = TWO_PI_I * (u @ x) * bb_transform(region, x).value
    return float(abs(lhs - rhs))


# -- vertex polynomial sum ------------------------------------------------------------

def _linear_form(u):
    """Coefficients of ``u . x`` in the basis ``x1^(m-i) x2^i`` with m = 1."""
    return np.array([u[0], u[1]], dtype=complex)


def _polymul_homogeneous(p, q):
    return np.convolve(p, q)


def eval_homogeneous(coeffs, x):
    """Evaluate ``sum_i coeffs[i] x1^(m-i) x2^i``; ``x`` has shape (..., 2)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    x = np.asarray(x, dtype=complex)
    m = len(coeffs) - 1
    i = np.arange(m + 1)
    return (coeffs * x[..., :1] ** (m - i) * x[..., 1:2] ** i).sum(axis=-1)


@dataclass(frozen=True, eq=False)
class VertexPolynomialSum:
    """``sum_v p_v(x) exp(-2 pi i v . x)`` with ``p_v`` homogeneous of degree K-1.

    ``entries`` maps a vertex tuple to coefficients in the basis
    ``x1^(K-1-i) x2^i``.
    """

    entries: dict
    degree: int
    directions: tuple

    def evaluate(self, x) -> complex:
        x = np.asarray(x, dtype=complex)
        total = 0j
        for v, p in self.entries.items():
            total += eval_homogeneous(p, x) * np.exp(-TWO_PI_I * (np.asarray(v) @ x))
        return complex(total)

    def as_dict(self):
        return {
            "degree": self.degree,
            "directions": [u.tolist() for u in self.directions],
            "entries": [
                {"vertex": list(v), "coefficients": [[c.real, c.imag] for c in p]} for v, p in self.entries.items()
            ],
        }


def vertex_polynomial_sum(mu: SegmentMeasure) -> VertexPolynomialSum:
    """Transform of ``D mu`` with ``D`` the product of derivatives along every direction.

    A segment ``a -> b`` of direction ``u_s`` contributes
    ``c (2 pi i)^(K-1) prod_{k != s} (u_k . x)`` at ``a`` and its negative at
    ``b``, so that the sum equals ``prod_k (2 pi i u_k . x) * FT(mu)(x)``.
    """
    K = len(mu.directions)
    if K < 1:
        raise InputError("measure has no segments")
    acc = {}
    for seg in mu.segments:
        s = mu.direction_index(seg.direction)
        poly = np.ones(1, dtype=complex)
        for k, uk in enumerate(mu.directions):
            if k != s:
                poly = _polymul_homogeneous(poly, _linear_form(uk))
        poly = poly * seg.c * TWO_PI_I ** (K - 1)
        # the derivative along the stored representative runs from start to end
        rep = mu.directions[s]
        start, end = (seg.a, seg.b) if rep @ seg.direction > 0 else (seg.b, seg.a)
        for point, sgn in ((start, 1.0), (end, -1.0)):
            key = _key(point)
            acc[key] = acc.get(key, np.zeros(K, dtype=complex)) + sgn * poly
    scale = max((np.abs(p).max() for p in acc.values()), default=1.0)
    entries = {v: p for v, p in sorted(acc.items()) if np.abs(p).max() > 1e-12 * scale}
    return VertexPolynomialSum(entries, K - 1, mu.directions)


def homogeneous_circle_vanishing_check(p, C: ComplexCircle, n_samples=256, imag_part=0.0) -> float:
    """Max ``|p(gamma(t))|`` over ``n_samples`` points of the trigonometric circle."""
    p = np.asarray(p, dtype=complex)
    if p.size == 0 or not np.any(p != 0):
        raise InputError("zero polynomial")
    t = 2 * np.pi * np.arange(n_samples) / n_samples + 1j * imag_part
    pts = circle_point_trig(C, t)[:, list(C.plane)]
    return float(np.abs(eval_homogeneous(p, pts)).max())
