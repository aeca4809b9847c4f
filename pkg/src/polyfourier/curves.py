"""Complex circles, parametrised curves and curve-level checks.

Curves are callables ``t -> gamma(t)`` on complex parameters, vectorised
over arrays of ``t``. Points where a curve is undefined (poles) come back as
NaN rows rather than raising, so scans can skip them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import InputError, InsufficientSamples, PoleAtParameter, UnknownName
from .transform import SINGULAR_TOL, _decomposition, vertex_coefficients

POLE_TOL = 1e-12
HULL_RANK_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ComplexCircle:
    """``{z : sum (z_k - a_k)^2 = R^2}`` traced in the plane of two axes."""

    center: np.ndarray
    radius: complex
    plane: tuple = (0, 1)

    def __post_init__(self):
        a = np.array(self.center, dtype=complex).ravel()
        a.setflags(write=False)
        object.__setattr__(self, "center", a)
        object.__setattr__(self, "radius", complex(self.radius))
        object.__setattr__(self, "plane", tuple(int(p) for p in self.plane))
        if self.radius == 0:
            raise InputError("circle radius must be nonzero")
        i, j = self.plane
        if i == j or not (0 <= i < len(a) and 0 <= j < len(a)):
            raise InputError(f"bad plane axes {self.plane} for dimension {len(a)}")

    @property
    def dim(self) -> int:
        return len(self.center)


def circle_point_trig(C: ComplexCircle, t):
    """``a + R cos t e_i + R sin t e_j``; vectorised over ``t``."""
    t = np.asarray(t, dtype=complex)
    out = np.broadcast_to(C.center, t.shape + (C.dim,)).copy()
    i, j = C.plane
    out[..., i] += C.radius * np.cos(t)
    out[..., j] += C.radius * np.sin(t)
    return out


def circle_point_rational(C: ComplexCircle, t, strict=True):
    """``a + R (1-t^2)/(1+t^2) e_i + R 2t/(1+t^2) e_j``.

    Raises :class:`PoleAtParameter` near ``t = +-i`` when ``strict``; otherwise
    those rows are NaN.
    """
    t = np.asarray(t, dtype=complex)
    den = 1 + t * t
    pole = np.abs(den) < POLE_TOL
    if strict and pole.any():
        raise PoleAtParameter("rational circle parameter at +-i")
    with np.errstate(divide="ignore", invalid="ignore"):
        x = (1 - t * t) / den
        y = 2 * t / den
    out = np.broadcast_to(C.center, t.shape + (C.dim,)).copy()
    i, j = C.plane
    out[..., i] += C.radius * x
    out[..., j] += C.radius * y
    out[pole] = np.nan
    return out


def sphere_membership(center, radius, z):
    """Residual ``sum (z_k - a_k)^2 - R^2`` of the complex sphere equation."""
    z = np.asarray(z, dtype=complex)
    a = np.asarray(center, dtype=complex)
    return ((z - a) ** 2).sum(axis=-1) - complex(radius) ** 2


# -- parametrised curves -------------------------------------------------------

class ParametricCurve:
    """Base class: ``kind``, ``dim``, declared order ``order`` and ``__call__``."""

    kind = "abstract"
    order = 0.0

    def __call__(self, t):  # pragma: no cover - interface
        raise NotImplementedError

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def point(self, t) -> np.ndarray:
        """Scalar evaluation that raises on poles."""
        z = self(np.asarray([t], dtype=complex))[0]
        if not np.isfinite(z).all():
            raise PoleAtParameter(f"curve undefined at t={t}")
        return z

    def default_interval(self):
        return (0.0, 1.0)


@dataclass(frozen=True, eq=False)
class TrigCircle(ParametricCurve):
    circle: ComplexCircle
    kind = "trig_circle"
    order = 1.0

    @property
    def dim(self):
        return self.circle.dim

    def __call__(self, t):
        return circle_point_trig(self.circle, t)

    def default_interval(self):
        return (0.0, 2 * math.pi)


@dataclass(frozen=True, eq=False)
class RationalCircle(ParametricCurve):
    circle: ComplexCircle
    kind = "rational_circle"
    order = 0.0

    @property
    def dim(self):
        return self.circle.dim

    def __call__(self, t):
        return circle_point_rational(self.circle, t, strict=False)

    def as_rational(self) -> "RationalCurve":
        a, R = self.circle.center, self.circle.radius
        i, j = self.circle.plane
        nums, dens = [], []
        for k in range(self.dim):
            if k == i:
                nums.append([a[k] + R, 0, a[k] - R])
                dens.append([1, 0, 1])
            elif k == j:
                nums.append([a[k], 2 * R, a[k]])
                dens.append([1, 0, 1])
            else:
                nums.append([a[k]])
                dens.append([1])
        return RationalCurve(nums, dens)


@dataclass(frozen=True, eq=False)
class RationalCurve(ParametricCurve):
    """Components ``num_k(t) / den_k(t)``; coefficients in ascending powers of t."""

    numerators: tuple
    denominators: tuple = None
    kind = "rational"
    order = 0.0

    def __post_init__(self):
        nums = tuple(np.trim_zeros(np.atleast_1d(np.asarray(n, dtype=complex)), "b") for n in self.numerators)
        nums = tuple(n if n.size else np.zeros(1, dtype=complex) for n in nums)
        if self.denominators is None:
            dens = tuple(np.ones(1, dtype=complex) for _ in nums)
        else:
            dens = tuple(np.trim_zeros(np.atleast_1d(np.asarray(d, dtype=complex)), "b") for d in self.denominators)
        if len(dens) != len(nums) or not nums:
            raise InputError("need one denominator per numerator")
        if any(d.size == 0 for d in dens):
            raise InputError("zero denominator polynomial")
        object.__setattr__(self, "numerators", nums)
        object.__setattr__(self, "denominators", dens)
        probe = np.array([0.123 + 0.0456j, 0.789 - 0.31j, -1.7 + 2.3j])
        if any((np.abs(P.polyval(probe, d)) < POLE_TOL).all() for d in dens):
            raise InputError("denominator vanishes at every probe point")

    @property
    def dim(self):
        return len(self.numerators)

    def __call__(self, t):
        t = np.asarray(t, dtype=complex)
        out = np.empty(t.shape + (self.dim,), dtype=complex)
        bad = np.zeros(t.shape, dtype=bool)
        for k, (n, d) in enumerate(zip(self.numerators, self.denominators)):
            den = P.polyval(t, d)
            bad |= np.abs(den) < POLE_TOL
            with np.errstate(divide="ignore", invalid="ignore"):
                out[..., k] = P.polyval(t, n) / den
        out[bad] = np.nan
        return out


def _t2_sin(t):
    return np.stack([t * t, np.sin(t)], axis=-1)


BUILTIN_CURVES = {"t2_sin": (_t2_sin, 2, 1.0)}


@dataclass(frozen=True, eq=False)
class AnalyticCurve(ParametricCurve):
    name: str
    kind = "builtin"

    def __post_init__(self):
        if self.name not in BUILTIN_CURVES:
            raise UnknownName(f"unknown builtin curve {self.name!r}; known: {sorted(BUILTIN_CURVES)}")

    @property
    def dim(self):
        return BUILTIN_CURVES[self.name][1]

    @property
    def order(self):
        return BUILTIN_CURVES[self.name][2]

    def __call__(self, t):
        return BUILTIN_CURVES[self.name][0](np.asarray(t, dtype=complex))


def builtin_curve(name: str) -> AnalyticCurve:
    return AnalyticCurve(name)


@dataclass(frozen=True, eq=False)
class Reparametrized(ParametricCurve):
    """``t -> base(alpha t + beta)``."""

    base: ParametricCurve
    alpha: complex
    beta: complex = 0.0

    @property
    def kind(self):
        return self.base.kind

    @property
    def order(self):
        return self.base.order

    @property
    def dim(self):
        return self.base.dim

    def __call__(self, t):
        return self.base(self.alpha * np.asarray(t, dtype=complex) + self.beta)


# -- checks ---------------------------------------------------------------------

def chebyshev_nodes(n, lo=0.0, hi=1.0):
    k = np.arange(n)
    x = np.cos((2 * k + 1) * math.pi / (2 * n))[::-1]
    return lo + (hi - lo) * (x + 1) / 2


class HullVerdict(NamedTuple):
    contained: bool
    normal: np.ndarray | None
    offset: complex | None
    min_singular_value: float
    singular_values: np.ndarray


def affine_hull_containment(curve: ParametricCurve, n_samples=None) -> HullVerdict:
    """Numerical test whether the curve lies in an affine hyperplane of C^d.

    Samples Chebyshev nodes on [0, 1], forms the differences
    ``gamma(t_i) - gamma(t_0)`` and looks at the smallest singular value
    relative to the largest. When contained, ``normal . gamma(t) == offset``.
    """
    d = curve.dim
    n = 4 * d if n_samples is None else int(n_samples)
    t = chebyshev_nodes(max(n, 1))
    pts = curve(t)
    pts = pts[np.isfinite(pts).all(axis=1)]
    if len(pts) < d + 1:
        raise InsufficientSamples(f"{len(pts)} usable samples, need at least {d + 1}")
    diffs = pts[1:] - pts[0]
    _, s, vh = np.linalg.svd(diffs)
    smin = float(s[d - 1]) if len(s) >= d else 0.0
    if s[0] == 0 or smin <= HULL_RANK_TOL * s[0]:
        normal = vh[d - 1].conj() if len(s) >= d else vh[-1].conj()
        normal = normal / normal[np.argmax(np.abs(normal))]
        offset = complex(normal @ pts[0])
        return HullVerdict(True, normal, offset, smin, s)
    return HullVerdict(False, None, None, smin, s)


def monomial_exponents(d, max_degree):
    return [e for e in itertools.product(range(max_degree + 1), repeat=d) if sum(e) <= max_degree]


def vanishing_polynomial_rank(curve: ParametricCurve, max_degree: int, n_samples=None, interval=(0.0, 1.0)) -> float:
    """Smallest singular value of the column-normalised monomial sample matrix.

    Columns are ``prod x_k^{e_k}`` over all exponents of total degree
    ``<= max_degree``, rows are samples ``gamma(t_i)`` at equispaced ``t_i``.
    A value near zero exhibits a polynomial relation on the curve.
    """
    exps = monomial_exponents(curve.dim, max_degree)
    need = 2 * len(exps)
    n = need if n_samples is None else int(n_samples)
    if n < need:
        raise InsufficientSamples(f"{n} samples for {len(exps)} monomials; need {need}")
    t = np.linspace(interval[0], interval[1], n)
    pts = curve(t)
    pts = pts[np.isfinite(pts).all(axis=1)]
    if len(pts) < need:
        raise InsufficientSamples(f"only {len(pts)} samples off poles")
    cols = np.stack([np.prod(pts ** np.asarray(e), axis=1) for e in exps], axis=1)
    norms = np.linalg.norm(cols, axis=0)
    cols = cols / np.where(norms > 0, norms, 1.0)
    return float(np.linalg.svd(cols, compute_uv=False)[-1])


# -- restriction of the transform to a curve ----------------------------------------

def restrict_bb_to_curve(region, curve: ParametricCurve, singular_tol=SINGULAR_TOL):
    """The transform along ``gamma`` as an exponential sum, one term per merged vertex."""
    from .expsum import ExponentialSum, ExpTerm

    decomp = _decomposition(region)
    if curve.dim != decomp.dim:
        raise InputError(f"curve dimension {curve.dim} != region dimension {decomp.dim}")

    def coefficient_matrix(t):
        z = curve(np.atleast_1d(np.asarray(t, dtype=complex)))
        ok = np.isfinite(z).all(axis=1)
        coeff = np.full((len(z), len(decomp.vertices)), np.nan, dtype=complex)
        if ok.any():
            coeff[ok] = vertex_coefficients(decomp, z[ok], singular_tol)[0]
        return coeff

    terms = []
    for k, v in enumerate(decomp.vertices):
        def coefficient(t, k=k):
            return coefficient_matrix(t)[:, k]

        terms.append(ExpTerm(v, coefficient, label=f"vertex {k}"))
    return ExponentialSum(tuple(terms), curve, coefficient_matrix=coefficient_matrix)
