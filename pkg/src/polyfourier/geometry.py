"""Convex polytopes, polytopal regions and their vertex cone decompositions.

A polytope is stored in V-representation together with its edge graph. The
edge graph is what the Brion-Barvinok formula needs: the tangent cone at a
vertex is generated by the edges leaving it, and it is triangulated into
simplicial cones without adding new generators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, Delaunay, HalfspaceIntersection, QhullError

from .config import rel_tol
from .errors import DegenerateInput, InputError, NotPointed

# interior-disjointness threshold for parts of a region (d <= 3)
OVERLAP_TOL = 1e-12
# simplicial cones with |det| below this are treated as degenerate slivers
DET_TOL = 1e-14


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _diameter(points):
    points = np.asarray(points, dtype=float)
    if len(points) < 2:
        return 0.0
    if len(points) > 400:
        # bounding-box diagonal is within a factor sqrt(d) and avoids O(n^2)
        return float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))
    diff = points[:, None, :] - points[None, :, :]
    return float(np.sqrt((diff ** 2).sum(-1)).max())


def _affine_rank(points, tol=1e-10):
    points = np.asarray(points, dtype=float)
    if len(points) < 2:
        return 0
    diffs = points[1:] - points[0]
    s = np.linalg.svd(diffs, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int((s > tol * s[0]).sum())


@dataclass(frozen=True, eq=False)
class Polytope:
    """Full-dimensional convex polytope given by its vertices and edges."""

    vertices: np.ndarray
    edges: tuple

    def __post_init__(self):
        verts = _frozen(self.vertices)
        if verts.ndim != 2 or verts.shape[0] == 0:
            raise InputError("vertices must be a nonempty (n, d) array")
        object.__setattr__(self, "vertices", verts)
        n, d = verts.shape
        edges = []
        for i, j in self.edges:
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise InputError(f"bad edge ({i}, {j}) for {n} vertices")
            edges.append((min(i, j), max(i, j)))
        edges = tuple(sorted(set(edges)))
        object.__setattr__(self, "edges", edges)

        if n < d + 1 or _affine_rank(verts) < d:
            raise DegenerateInput(f"vertices do not span {d} dimensions")
        degree = np.zeros(n, dtype=int)
        for i, j in edges:
            degree[i] += 1
            degree[j] += 1
        if (degree < d).any():
            bad = int(np.argmin(degree))
            raise InputError(f"vertex {bad} has {degree[bad]} incident edges, need at least {d}")
        if d >= 2:
            try:
                hull = ConvexHull(verts)
            except QhullError as exc:
                raise DegenerateInput(str(exc)) from exc
            if len(hull.vertices) != n:
                missing = sorted(set(range(n)) - set(hull.vertices.tolist()))
                raise InputError(f"vertices {missing} are not extreme points")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @cached_property
    def neighbours(self):
        nb = [[] for _ in range(len(self.vertices))]
        for i, j in self.edges:
            nb[i].append(j)
            nb[j].append(i)
        return [sorted(x) for x in nb]

    @cached_property
    def simplices(self) -> np.ndarray:
        """Simplicial decomposition as an (m, d+1, d) array of vertex coordinates."""
        if self.dim == 1:
            lo, hi = self.vertices.min(), self.vertices.max()
            return np.array([[[lo], [hi]]])
        tri = Delaunay(self.vertices)
        simp = self.vertices[tri.simplices]
        dets = np.abs(np.linalg.det(simp[:, 1:, :] - simp[:, :1, :]))
        return simp[dets > DET_TOL * max(1.0, dets.max())]

    @cached_property
    def volume(self) -> float:
        simp = self.simplices
        dets = np.abs(np.linalg.det(simp[:, 1:, :] - simp[:, :1, :]))
        return float(dets.sum() / math.factorial(self.dim))

    @cached_property
    def halfspaces(self) -> np.ndarray:
        """Facet inequalities ``A x + b <= 0`` stacked as rows ``[A, b]``."""
        return ConvexHull(self.vertices).equations

    def translated(self, tau) -> "Polytope":
        return Polytope(self.vertices + np.asarray(tau, dtype=float), self.edges)

    def transformed(self, matrix) -> "Polytope":
        return Polytope(self.vertices @ np.asarray(matrix, dtype=float).T, self.edges)


@dataclass(frozen=True, eq=False)
class PolytopalRegion:
    """Finite union of interior-disjoint convex polytopes."""

    parts: tuple
    check_disjoint: bool = field(default=True, repr=False)

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise InputError("a region needs at least one part")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise InputError(f"parts have different dimensions {sorted(dims)}")
        object.__setattr__(self, "parts", parts)
        if self.check_disjoint and parts[0].dim <= 3:
            for (i, p), (j, q) in itertools.combinations(enumerate(parts), 2):
                vol = intersection_volume(p, q)
                if vol >= OVERLAP_TOL:
                    raise InputError(f"parts {i} and {j} overlap (intersection volume {vol:.3g})")

    @classmethod
    def single(cls, polytope: Polytope) -> "PolytopalRegion":
        return cls((polytope,))

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    @cached_property
    def all_vertices(self) -> np.ndarray:
        return np.vstack([p.vertices for p in self.parts])

    @cached_property
    def diameter(self) -> float:
        return _diameter(self.all_vertices)

    @cached_property
    def decomposition(self) -> "VertexConeDecomposition":
        return decompose(self)

    @property
    def merged_vertices(self) -> np.ndarray:
        return self.decomposition.vertices


def intersection_volume(p: Polytope, q: Polytope) -> float:
    """Volume of ``p & q`` via halfspace intersection (zero for face contacts)."""
    lo = np.maximum(p.vertices.min(0), q.vertices.min(0))
    hi = np.minimum(p.vertices.max(0), q.vertices.max(0))
    if (hi - lo <= 0).any():
        return 0.0
    hs = np.vstack([p.halfspaces, q.halfspaces])
    A, b = hs[:, :-1], hs[:, -1]
    norms = np.linalg.norm(A, axis=1)
    d = A.shape[1]
    # Chebyshev centre: maximise r subject to A x + r |A| <= -b
    res = linprog(
        c=np.r_[np.zeros(d), -1.0],
        A_ub=np.c_[A, norms],
        b_ub=-b,
        bounds=[(None, None)] * d + [(0, None)],
        method="highs",
    )
    if not res.success or res.x[-1] < 1e-9 * max(p_scale(p), p_scale(q)):
        return 0.0
    centre = res.x[:-1]
    try:
        inter = HalfspaceIntersection(hs, centre)
        return float(ConvexHull(inter.intersections).volume)
    except QhullError:
        return 0.0


def p_scale(p: Polytope) -> float:
    return float(np.ptp(p.vertices, axis=0).max())


def convex_hull(points) -> Polytope:
    """Extreme points and edge graph of the hull of a planar or spatial point set."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise InputError("points must be an (n, d) array")
    d = pts.shape[1]
    if d not in (2, 3):
        raise InputError(f"hull construction supports d in {{2, 3}}, got d={d}; supply edges explicitly")
    if len(pts) < d + 1 or _affine_rank(pts) < d:
        raise DegenerateInput(f"points are not {d}-dimensional")
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateInput(str(exc)) from exc

    if d == 2:
        # hull.vertices is counter-clockwise; drop points lying on an edge
        ring = list(hull.vertices)
        keep = []
        m = len(ring)
        for k in range(m):
            a, b, c = pts[ring[k - 1]], pts[ring[k]], pts[ring[(k + 1) % m]]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if abs(cross) > 1e-12 * max(1.0, np.linalg.norm(c - a)) ** 2:
                keep.append(ring[k])
        verts = pts[keep]
        n = len(keep)
        edges = [(k, (k + 1) % n) for k in range(n)]
        return Polytope(verts, edges)

    # d == 3: a ridge between two triangles is a true edge iff the facet planes differ
    eq = hull.equations
    pairs = set()
    for s, simplex in enumerate(hull.simplices):
        for k, nb in enumerate(hull.neighbors[s]):
            if nb < s:
                continue
            if np.allclose(eq[s], eq[nb], atol=1e-9):
                continue
            ridge = [int(v) for idx, v in enumerate(simplex) if idx != k]
            pairs.add((min(ridge), max(ridge)))
    used = sorted({v for e in pairs for v in e})
    index = {v: i for i, v in enumerate(used)}
    edges = [(index[i], index[j]) for i, j in sorted(pairs)]
    return Polytope(pts[used], edges)


def tangent_cone(P: Polytope, v: int) -> np.ndarray:
    """Unit edge directions leaving vertex ``v``, ordered by neighbour index."""
    if not 0 <= v < len(P.vertices):
        raise InputError(f"vertex index {v} out of range")
    apex = P.vertices[v]
    dirs = P.vertices[P.neighbours[v]] - apex
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class SimplicialCone:
    apex: np.ndarray
    generators: np.ndarray  # rows are the d generators
    abs_det: float

    def __post_init__(self):
        object.__setattr__(self, "apex", _frozen(self.apex))
        object.__setattr__(self, "generators", _frozen(self.generators))

    @classmethod
    def from_generators(cls, apex, generators) -> "SimplicialCone":
        gens = np.asarray(generators, dtype=float)
        return cls(apex, gens, float(abs(np.linalg.det(gens))))

    def contains(self, direction, tol=1e-12) -> bool:
        """Whether ``direction`` lies in the cone (coefficients all >= -tol)."""
        lam = np.linalg.solve(self.generators.T, np.asarray(direction, dtype=float))
        return bool((lam >= -tol).all())


def _positive_functional(gens):
    """A vector m with m . w > 0 for every generator, or None if the cone has a line."""
    mean = gens.mean(axis=0)
    if np.linalg.norm(mean) > 0:
        m = mean / np.linalg.norm(mean)
        if (gens @ m > 1e-9).all():
            return m
    n, d = gens.shape
    # maximise s subject to w_k . m >= s, |m_i| <= 1
    res = linprog(
        c=np.r_[np.zeros(d), -1.0],
        A_ub=np.c_[-gens, np.ones(n)],
        b_ub=np.zeros(n),
        bounds=[(-1, 1)] * d + [(None, 1)],
        method="highs",
    )
    if not res.success or res.x[-1] <= 1e-10:
        return None
    m = res.x[:-1]
    return m / np.linalg.norm(m)


def triangulate_cone(apex, generators) -> list:
    """Split a pointed cone into simplicial cones using only its own generators.

    The vertex figure (section by the hyperplane ``m . x = 1`` for a direction
    ``m`` positive on every generator) is triangulated by pulling from the
    lowest-index generator, i.e. coning it over every boundary facet that does
    not contain it.
    """
    gens = np.asarray(generators, dtype=float)
    apex = np.asarray(apex, dtype=float)
    if gens.ndim != 2:
        raise InputError("generators must be a (k, d) array")
    n, d = gens.shape
    if n < d or np.linalg.matrix_rank(gens, tol=1e-10) < d:
        raise DegenerateInput(f"generators do not span {d} dimensions")
    gens = gens / np.linalg.norm(gens, axis=1, keepdims=True)
    m = _positive_functional(gens)
    if m is None:
        raise NotPointed("cone contains a line")
    if n == d:
        return [SimplicialCone.from_generators(apex, gens)]

    section = gens / (gens @ m)[:, None]
    # orthonormal basis of the hyperplane orthogonal to m
    basis = np.linalg.svd(m[None, :])[2][1:]
    coords = (section - m) @ basis.T

    if d == 2:
        lo, hi = int(np.argmin(coords[:, 0])), int(np.argmax(coords[:, 0]))
        pair = sorted((lo, hi))
        return [SimplicialCone.from_generators(apex, gens[pair])]

    hull = ConvexHull(coords)
    hull_vertices = set(hull.vertices.tolist())
    pivot = min(hull_vertices)
    p0 = np.r_[coords[pivot], 1.0]
    cones = []
    for simplex, eq in zip(hull.simplices, hull.equations):
        if abs(eq @ p0) <= 1e-10:
            continue
        idx = [pivot] + sorted(int(i) for i in simplex)
        cone = SimplicialCone.from_generators(apex, gens[idx])
        if cone.abs_det > DET_TOL:
            cones.append(cone)
    return cones


@dataclass(frozen=True, eq=False)
class VertexConeDecomposition:
    """Simplicial tangent cones of a region grouped by merged vertex.

    ``vertices[k]`` is the k-th merged vertex and ``entries[k]`` the list of
    simplicial cones emanating from it, accumulated over every part that has
    it as a vertex. Stacked arrays are kept for vectorised evaluation.
    """

    dim: int
    vertices: np.ndarray
    entries: tuple
    generators: np.ndarray = field(init=False, repr=False)
    abs_dets: np.ndarray = field(init=False, repr=False)
    cone_vertex: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", _frozen(self.vertices))
        cones = [c for group in self.entries for c in group]
        owner = [k for k, group in enumerate(self.entries) for _ in group]
        object.__setattr__(self, "generators", _frozen(np.array([c.generators for c in cones]).reshape(-1, self.dim, self.dim)))
        object.__setattr__(self, "abs_dets", _frozen([c.abs_det for c in cones]))
        object.__setattr__(self, "cone_vertex", _frozen(owner, dtype=int))

    @property
    def cone_counts(self) -> list:
        """Number of simplicial cones ``M_v`` at each merged vertex."""
        return [len(group) for group in self.entries]

    def as_dict(self) -> dict:
        return {tuple(v.tolist()): list(group) for v, group in zip(self.vertices, self.entries)}


def merge_points(points, tol):
    """Cluster points closer than ``tol``; returns (representatives, labels)."""
    points = np.asarray(points, dtype=float)
    reps = []
    labels = np.empty(len(points), dtype=int)
    for i, p in enumerate(points):
        for k, r in enumerate(reps):
            if np.linalg.norm(p - r) <= tol:
                labels[i] = k
                break
        else:
            labels[i] = len(reps)
            reps.append(p)
    return np.array(reps).reshape(-1, points.shape[1]), labels


def decompose(region: PolytopalRegion) -> VertexConeDecomposition:
    tol = rel_tol() * max(region.diameter, 1e-300)
    reps, labels = merge_points(region.all_vertices, tol)
    groups = [[] for _ in range(len(reps))]
    offset = 0
    for part in region.parts:
        for v in range(len(part.vertices)):
            apex = reps[labels[offset + v]]
            groups[labels[offset + v]].extend(triangulate_cone(apex, tangent_cone(part, v)))
        offset += len(part.vertices)
    return VertexConeDecomposition(region.dim, reps, tuple(tuple(g) for g in groups))


def volume(region) -> float:
    if isinstance(region, Polytope):
        return region.volume
    return float(sum(p.volume for p in region.parts))


def random_rotation(seed: int, d: int) -> np.ndarray:
    """Haar-distributed rotation matrix (det +1), deterministic in ``seed``."""
    if d < 2:
        raise InputError("rotation needs d >= 2")
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def apply_rotation(region: PolytopalRegion, Q) -> PolytopalRegion:
    Q = np.asarray(Q, dtype=float)
    return PolytopalRegion(tuple(p.transformed(Q) for p in region.parts), check_disjoint=False)


def translate(region: PolytopalRegion, tau) -> PolytopalRegion:
    return PolytopalRegion(tuple(p.translated(tau) for p in region.parts), check_disjoint=False)


class ProjectionCheck(NamedTuple):
    distinct: bool
    min_distance: float
    collisions: list


def projection_collisions(points, tol=None, axes=(0, 1)) -> ProjectionCheck:
    """Pairs of points whose projections onto the ``axes`` plane coincide."""
    pts = np.asarray(points, dtype=float)
    if tol is None:
        tol = rel_tol() * max(_diameter(pts), 1e-300)
    proj = pts[:, list(axes)]
    if len(proj) < 2:
        return ProjectionCheck(True, math.inf, [])
    diff = proj[:, None, :] - proj[None, :, :]
    dist = np.sqrt((diff ** 2).sum(-1))
    iu = np.triu_indices(len(proj), k=1)
    pair_d = dist[iu]
    collisions = [(int(i), int(j)) for i, j, dd in zip(*iu, pair_d) if dd < tol]
    return ProjectionCheck(not collisions, float(pair_d.min()), collisions)


def generic_projection_check(region, tol=None) -> ProjectionCheck:
    """Whether all merged vertices project to distinct points of the (x1, x2) plane."""
    if isinstance(region, PolytopalRegion):
        points = region.merged_vertices
    elif isinstance(region, Polytope):
        points = region.vertices
    else:
        points = np.asarray(region, dtype=float)
    return projection_collisions(points, tol)


# -- small constructors used by tests, the CLI and the demos ------------------

def box(lo: Sequence[float], hi: Sequence[float]) -> Polytope:
    """Axis-aligned box ``[lo, hi]``."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    d = len(lo)
    corners = np.array(list(itertools.product((0, 1), repeat=d)))
    verts = lo + corners * (hi - lo)
    edges = [
        (i, j)
        for i, j in itertools.combinations(range(len(corners)), 2)
        if np.abs(corners[i] - corners[j]).sum() == 1
    ]
    return Polytope(verts, edges)


def unit_cube(d: int) -> Polytope:
    return box(np.zeros(d), np.ones(d))


def standard_simplex(d: int) -> Polytope:
    verts = np.vstack([np.zeros(d), np.eye(d)])
    edges = list(itertools.combinations(range(d + 1), 2))
    return Polytope(verts, edges)


def regular_polygon(n: int, radius: float = 1.0, centre=(0.0, 0.0), phase: float = 0.0) -> Polytope:
    angles = phase + 2 * np.pi * np.arange(n) / n
    verts = np.c_[np.cos(angles), np.sin(angles)] * radius + np.asarray(centre, dtype=float)
    return Polytope(verts, [(k, (k + 1) % n) for k in range(n)])


def polygon(points) -> Polytope:
    """Convex polygon from vertices listed in boundary order."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    return Polytope(pts, [(k, (k + 1) % n) for k in range(n)])
