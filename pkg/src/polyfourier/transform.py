"""Fourier-Laplace transform of polytopal regions.

``bb_transform`` evaluates the vertex-cone (Brion-Barvinok) expansion

    F(z) = sum_v sum_j |det K_vj| exp(-2 pi i v.z) / ((2 pi i)^d prod_k w_vjk . z)

and ``quadrature_transform`` integrates ``exp(-2 pi i z.x)`` directly, as an
independent oracle. The pairing ``z . x`` is bilinear (no conjugation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError, NearSingular, OverflowGuard, ToleranceNotReached
from .geometry import Polytope, PolytopalRegion, VertexConeDecomposition

SINGULAR_TOL = 1e-10
EXP_LIMIT = 700.0
TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class EvaluationResult:
    value: complex
    min_denominator_factor: float
    singular_flag: bool


def as_complex_vector(z, dim=None) -> np.ndarray:
    arr = np.asarray(z, dtype=complex)
    if arr.ndim != 1:
        raise InputError("z must be a 1-D complex vector")
    if dim is not None and arr.shape[0] != dim:
        raise InputError(f"z has {arr.shape[0]} coordinates, region has dimension {dim}")
    if not np.isfinite(arr).all():
        raise InputError("z must have finite entries")
    return arr


def _decomposition(region) -> VertexConeDecomposition:
    if isinstance(region, VertexConeDecomposition):
        return region
    if isinstance(region, Polytope):
        region = PolytopalRegion.single(region)
    return region.decomposition


def cone_terms(decomp: VertexConeDecomposition, Z, singular_tol=SINGULAR_TOL):
    """Per-cone rational factors and vertex exponentials at many points.

    Returns ``(coeff, expo, factor)`` with shapes (n, C), (n, V) and (n, C):
    ``coeff`` is ``|det| / ((2 pi i)^d prod w.z)`` (NaN where some ``|w.z|`` is
    below ``singular_tol * max(1, |z|)``), ``expo`` is the exponent
    ``-2 pi i v.z`` and ``factor`` the smallest ``|w.z|`` of each cone.
    """
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    dots = np.einsum("ckd,nd->nck", decomp.generators, Z)
    factor = np.abs(dots).min(axis=2)
    scale = np.maximum(1.0, np.linalg.norm(Z, axis=1))
    bad = factor < singular_tol * scale[:, None]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        coeff = decomp.abs_dets / (TWO_PI_I ** decomp.dim * dots.prod(axis=2))
    coeff = np.where(bad, np.nan, coeff)
    expo = -TWO_PI_I * (Z @ decomp.vertices.T)
    return coeff, expo, factor


def vertex_coefficients(decomp, Z, singular_tol=SINGULAR_TOL):
    """Rational coefficient ``q_v/p_v`` of each merged vertex, shape (n, V)."""
    coeff, expo, factor = cone_terms(decomp, Z, singular_tol)
    out = np.zeros((coeff.shape[0], len(decomp.vertices)), dtype=complex)
    for c, owner in enumerate(decomp.cone_vertex):
        out[:, owner] += coeff[:, c]
    return out, expo, factor


def check_exponent(expo):
    re = np.abs(np.real(expo))
    if np.nanmax(re, initial=0.0) > EXP_LIMIT:
        raise OverflowGuard(f"|Im(2 pi v.z)| = {np.nanmax(re):.1f} exceeds {EXP_LIMIT}")


def bb_values(region, Z, singular_tol=SINGULAR_TOL):
    """Vectorised transform: values (NaN at near-singular points) and min ``|w.z|``."""
    decomp = _decomposition(region)
    coeff, expo, factor = vertex_coefficients(decomp, Z, singular_tol)
    check_exponent(expo)
    values = (coeff * np.exp(expo)).sum(axis=1)
    return values, factor.min(axis=1)


def bb_transform(region, z, singular_tol=SINGULAR_TOL, on_singular="raise") -> EvaluationResult:
    """Evaluate the transform at one complex frequency via vertex cones.

    With ``on_singular="flag"`` a near-singular point returns a NaN value and
    ``singular_flag=True`` instead of raising :class:`NearSingular`.
    """
    decomp = _decomposition(region)
    z = as_complex_vector(z, decomp.dim)
    coeff, expo, factor = cone_terms(decomp, z[None, :], singular_tol)
    threshold = singular_tol * max(1.0, float(np.linalg.norm(z)))
    min_factor = float(factor.min())
    if min_factor < threshold:
        if on_singular == "flag":
            return EvaluationResult(complex(np.nan, np.nan), min_factor, True)
        c = int(np.argmin(factor[0]))
        k = int(np.argmin(np.abs(decomp.generators[c] @ z)))
        v = int(decomp.cone_vertex[c])
        raise NearSingular(
            f"|w.z| = {min_factor:.3g} below {threshold:.3g} at vertex {decomp.vertices[v].tolist()}",
            vertex=decomp.vertices[v].tolist(),
            cone=c,
            generator=decomp.generators[c, k].tolist(),
            factor=min_factor,
        )
    check_exponent(expo)
    per_cone = coeff[0] * np.exp(expo[0, decomp.cone_vertex])
    return EvaluationResult(complex(per_cone.sum()), min_factor, False)


def _generic_direction(d):
    k = np.arange(1, d + 1)
    u = np.cos(1.3 * k + 0.4) + 1j * np.sin(0.7 * k + 1.1)
    return u / np.linalg.norm(u)


def bb_transform_perturbed(region, z, n_points=16, radius=None, direction=None) -> complex:
    """Value at ``z`` (singular or not) as a mean over a small circle around it.

    For entire F, ``F(z)`` equals the average of ``F(z + r e^{i theta} u)``
    over equispaced angles up to terms of order ``r^n_points``. The circle
    radius is kept below a quarter of the distance to every hyperplane that
    ``z`` itself is not on.
    """
    decomp = _decomposition(region)
    z = as_complex_vector(z, decomp.dim)
    u = _generic_direction(decomp.dim) if direction is None else np.asarray(direction, dtype=complex)
    u = u / np.linalg.norm(u)
    if radius is None:
        dots = np.abs(decomp.generators @ z).ravel()
        slopes = np.abs(decomp.generators @ u).ravel()
        scale = max(1.0, float(np.linalg.norm(z)))
        off = dots > SINGULAR_TOL * scale
        radius = 0.05
        if off.any():
            radius = min(radius, 0.25 * float((dots[off] / np.maximum(slopes[off], 1e-300)).min()))
    theta = 2 * math.pi * (np.arange(n_points) + 0.5) / n_points
    points = z[None, :] + radius * np.exp(1j * theta)[:, None] * u[None, :]
    values, _ = bb_values(decomp, points, singular_tol=1e-15)
    return complex(values.mean())


def transform_limit_at_zero(region, direction=None, scales=None) -> complex:
    """Value at z = 0 by polynomial extrapolation along ``s * direction``.

    The vertex-cone formula is undefined at the origin, but the transform is
    entire; five shrinking points and Neville's scheme recover F(0).
    """
    decomp = _decomposition(region)
    d = decomp.dim
    if direction is None:
        direction = np.array([math.sqrt(k + 2) % 1 + 0.31 * (k + 1) for k in range(d)]) * np.exp(0.37j)
    direction = np.asarray(direction, dtype=complex)
    direction = direction / np.linalg.norm(direction)
    if scales is None:
        scales = 0.04 / 2.0 ** np.arange(5)
    xs = np.asarray(scales, dtype=float)
    ys = np.array([bb_transform(decomp, s * direction, singular_tol=1e-14).value for s in xs])
    # Neville extrapolation to s = 0
    p = ys.astype(complex).copy()
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i])
    return complex(p[0])


def transform_additivity_check(region: PolytopalRegion, z) -> float:
    """``|F_R(z) - sum_parts F_part(z)|`` for the merged versus per-part expansions."""
    whole = bb_transform(region, z).value
    parts = sum(bb_transform(PolytopalRegion.single(p), z).value for p in region.parts)
    return float(abs(whole - parts))


# -- quadrature oracle --------------------------------------------------------

@lru_cache(maxsize=None)
def simplex_rule(d: int, order: int):
    """Collapsed (Duffy) tensor Gauss-Legendre rule on the unit simplex.

    Returns barycentric-free coordinates ``lam`` (m, d) with ``sum lam <= 1``
    and weights summing to ``1/d!``.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    x = (x + 1) / 2
    w = w / 2
    grids = np.meshgrid(*([x] * d), indexing="ij")
    wgrids = np.meshgrid(*([w] * d), indexing="ij")
    u = np.stack([g.ravel() for g in grids], axis=1)
    weight = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    lam = np.empty_like(u)
    rest = np.ones(len(u))
    for k in range(d):
        lam[:, k] = rest * u[:, k]
        if k < d - 1:
            weight = weight * (1 - u[:, k]) ** (d - 1 - k)
        rest = rest * (1 - u[:, k])
    lam.setflags(write=False)
    weight.setflags(write=False)
    return lam, weight


def _simplex_integral(simplex, z, lam, weight):
    base = simplex[0]
    edges = simplex[1:] - base
    jac = abs(np.linalg.det(edges))
    phase_base = -TWO_PI_I * (base @ z)
    coeffs = -TWO_PI_I * (edges @ z)
    return jac * np.exp(phase_base) * (weight * np.exp(lam @ coeffs)).sum()


def _bisect(simplex):
    n = len(simplex)
    best, pair = -1.0, (0, 1)
    for i in range(n):
        for j in range(i + 1, n):
            length = np.sum((simplex[i] - simplex[j]) ** 2)
            if length > best + 1e-15:
                best, pair = length, (i, j)
    i, j = pair
    mid = (simplex[i] + simplex[j]) / 2
    a = simplex.copy()
    b = simplex.copy()
    a[j] = mid
    b[i] = mid
    return a, b


def quadrature_transform(region, z, tol=1e-10, order=16, max_simplices=200_000, imag_bound=8.0) -> complex:
    """Integrate ``exp(-2 pi i z.x)`` over the region by adaptive simplex quadrature.

    Each part is split into simplices; a simplex is accepted when its
    integral agrees with the sum over its two longest-edge halves to within
    its volume share of ``tol * max(1, |estimate|)``.
    """
    if isinstance(region, Polytope):
        region = PolytopalRegion.single(region)
    z = as_complex_vector(z, region.dim)
    if np.abs(z.imag).max() > imag_bound:
        raise InputError(f"|Im z| exceeds {imag_bound}")
    d = region.dim
    lam, weight = simplex_rule(d, order)
    total_volume = sum(p.volume for p in region.parts)
    stack = []
    for p in region.parts:
        for s in p.simplices:
            stack.append((s, _simplex_integral(s, z, lam, weight)))

    # crude magnitude for the mixed tolerance
    scale = max(1.0, abs(sum(v for _, v in stack)))
    result = 0.0 + 0.0j
    processed = 0
    while stack:
        simplex, value = stack.pop()
        processed += 1
        if processed > max_simplices:
            raise ToleranceNotReached(f"more than {max_simplices} simplices needed for tol={tol}")
        a, b = _bisect(simplex)
        va = _simplex_integral(a, z, lam, weight)
        vb = _simplex_integral(b, z, lam, weight)
        vol = abs(np.linalg.det(simplex[1:] - simplex[0])) / math.factorial(d)
        if abs(va + vb - value) <= tol * scale * vol / total_volume:
            result += va + vb
        else:
            stack.append((a, va))
            stack.append((b, vb))
    return complex(result)
