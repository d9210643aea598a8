"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

from typing import List

import numpy as np

from .manifold import AffineComplex
from .polytope import RationalPolytope, from_points


def check_polytope(X) -> RationalPolytope:
    """Accept a RationalPolytope or an array-like of vertex coordinates (rationals as strings ok)."""
    if isinstance(X, RationalPolytope):
        return X
    if isinstance(X, np.ndarray):
        if X.ndim != 2:
            raise ValueError(f"expected a 2-d array of vertices, got shape {X.shape}")
        if X.dtype.kind == "f":
            raise TypeError("floating-point vertices are not exact; pass integers, strings or Fractions")
        X = X.tolist()
    if isinstance(X, (list, tuple)) and X and all(isinstance(v, (list, tuple)) for v in X):
        return from_points(X)
    raise TypeError(f"cannot interpret {type(X).__name__} as a rational polytope")


def check_complex(X) -> AffineComplex:
    if isinstance(X, AffineComplex):
        return X
    if isinstance(X, dict):
        from .io import complex_from_dict

        return complex_from_dict(X)
    raise TypeError(f"cannot interpret {type(X).__name__} as an affine complex")


def check_dilations(m) -> List[int]:
    """Normalize a scalar or array-like of dilation factors to a list of ints >= 1."""
    values = np.atleast_1d(np.asarray(m, dtype=object)).ravel().tolist()
    out = []
    for v in values:
        if isinstance(v, (bool, np.bool_)) or int(v) != v:
            raise ValueError(f"dilation factors must be integers, got {v!r}")
        v = int(v)
        if v < 1:
            raise ValueError(f"dilation factors must be >= 1, got {v}")
        out.append(v)
    return out


def check_positive(name: str, value, allow_none: bool = False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or int(value) != value or int(value) < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
