"""Fourier-Laplace transforms of polytopal regions and non-vanishing checks on complex curves."""

from .config import rel_tol
from .curves import (
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
from .errors import *  # noqa: F401,F403
from .expsum import (
    ExponentialSum,
    ExpTerm,
    brownawell_pair_check,
    cosine_asymptotics,
    cosine_sine_asymptotics,
    decay_lower_bound_check,
    dominant_term,
    evaluate,
    growth_rates,
    min_modulus_scan,
    verify_dominance,
)
from .geometry import (
    PolytopalRegion,
    Polytope,
    SimplicialCone,
    VertexConeDecomposition,
    box,
    convex_hull,
    decompose,
    generic_projection_check,
    polygon,
    random_rotation,
    regular_polygon,
    standard_simplex,
    tangent_cone,
    triangulate_cone,
    unit_cube,
    volume,
)
from .planar import (
    Segment,
    SegmentMeasure,
    derivative_transform_identity_residual,
    homogeneous_circle_vanishing_check,
    polygon_directional_derivative,
    segment_measure_transform,
    vertex_polynomial_sum,
)
from .special import bessel_j1, bessel_j1_zero, disk_transform_profile, vanishing_radius
from .transform import (
    bb_transform,
    bb_transform_perturbed,
    quadrature_transform,
    transform_additivity_check,
    transform_limit_at_zero,
)

__version__ = "0.1.0"
