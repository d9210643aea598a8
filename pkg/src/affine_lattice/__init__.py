"""Exact lattice-point counting on rational polytopes and integral-integral affine complexes."""

from .arith import AffZMap, affz_apply, affz_compose, affz_invert, is_unimodular, solve_linear
from .catalog import builtin, klein_bottle, torus
from .estimators import EhrhartEstimator, ManifoldEhrhartEstimator
from .lattice import (
    QuasiPolynomial,
    count,
    ehrhart_fit,
    enumerate_points,
    quasipoly_eval,
    quasipoly_is_zero,
    quasipoly_sub,
)
from .manifold import (
    AffineComplex,
    Gluing,
    complex_volume,
    count_inclusion_exclusion,
    count_union_find,
    integral_points,
    manifold_ehrhart,
    validate,
    verify_downstairs,
)
from .polytope import RationalPolytope, affine_image, bounding_box, contains, from_points, intersect, volume

__version__ = "0.1.0"
