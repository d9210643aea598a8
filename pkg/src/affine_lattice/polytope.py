"""Exact rational polytopes with a cached half-space description.

Hulls and vertex enumeration are brute force over subsets of points or
constraints, so the ambient dimension is capped (default 4, see
:func:`set_dim_cap`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .arith import (
    AffZMap,
    DimensionMismatchError,
    QVector,
    affz_apply,
    determinant,
    dot,
    nullspace,
    parse_rational,
    rank,
    rref,
    solve_linear,
    primitive_integer,
)

DEFAULT_DIM_CAP = 4
_dim_cap = DEFAULT_DIM_CAP


class DimensionCapError(ValueError):
    pass


def set_dim_cap(cap: int) -> None:
    global _dim_cap
    if cap < 1:
        raise ValueError("dimension cap must be at least 1")
    _dim_cap = int(cap)


def get_dim_cap() -> int:
    return _dim_cap


@dataclass(frozen=True, order=True)
class HalfSpace:
    """``normal . x <= offset`` (or ``== offset`` when ``equality``).

    Normals are primitive integer vectors. For equalities the system is kept in
    reduced echelon form before scaling, so the first nonzero entry is positive.
    """

    normal: Tuple[int, ...]
    offset: Fraction
    equality: bool = False

    def value(self, x: Sequence) -> Fraction:
        return dot(self.normal, x)

    def satisfied(self, x: Sequence) -> bool:
        v = self.value(x)
        return v == self.offset if self.equality else v <= self.offset

    def tight(self, x: Sequence) -> bool:
        return self.value(x) == self.offset


@dataclass(frozen=True)
class RationalPolytope:
    """Convex hull of finitely many rational points.

    Build with :func:`from_points`; ``vertices`` are the extreme points in
    lexicographic order, ``equalities`` cut out the affine span and ``facets``
    are the facet inequalities inside that span.
    """

    ambient_dim: int
    vertices: Tuple[QVector, ...]
    equalities: Tuple[HalfSpace, ...]
    facets: Tuple[HalfSpace, ...]

    @property
    def affine_dim(self) -> int:
        return self.ambient_dim - len(self.equalities)

    @property
    def constraints(self) -> Tuple[HalfSpace, ...]:
        return self.equalities + self.facets

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equalities

    def __contains__(self, x) -> bool:
        return contains(self, x)

    @cached_property
    def denominator_lcm(self) -> int:
        out = 1
        for v in self.vertices:
            for c in v:
                out = math.lcm(out, c.denominator)
        return out

    def __repr__(self):
        verts = ", ".join("(" + ", ".join(str(c) for c in v) + ")" for v in self.vertices)
        return f"RationalPolytope(dim={self.ambient_dim}, affine_dim={self.affine_dim}, vertices=[{verts}])"


def _canonical_equalities(normals: List[Tuple[int, ...]], base: QVector) -> Tuple[HalfSpace, ...]:
    if not normals:
        return ()
    reduced, _ = rref(normals)
    out = []
    for row in reduced:
        normal = primitive_integer(row)
        out.append(HalfSpace(normal, dot(normal, base), equality=True))
    return tuple(out)


def from_points(points: Sequence[Sequence]) -> RationalPolytope:
    """Convex hull of ``points``, with non-extreme points dropped."""
    pts = sorted({tuple(parse_rational(c) for c in p) for p in points})
    if not pts:
        raise ValueError("a polytope needs at least one point")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise DimensionMismatchError("points have different dimensions")
    if n > _dim_cap:
        raise DimensionCapError(f"ambient dimension {n} exceeds the cap {_dim_cap}")
    if n == 0:
        raise ValueError("ambient dimension must be at least 1")

    base = pts[0]
    directions = [tuple(a - b for a, b in zip(p, base)) for p in pts[1:]]
    eq_normals = nullspace(directions, n) if directions else [
        tuple(int(i == j) for j in range(n)) for i in range(n)
    ]
    equalities = _canonical_equalities(eq_normals, base)
    d = n - len(equalities)
    if d == 0:
        return RationalPolytope(n, (base,), equalities, ())

    facets = set()
    for combo in combinations(pts, d):
        q0 = combo[0]
        rows = [tuple(a - b for a, b in zip(q, q0)) for q in combo[1:]]
        rows += [h.normal for h in equalities]
        ns = nullspace(rows, n)
        if len(ns) != 1:
            continue
        normal = ns[0]
        offset = dot(normal, q0)
        values = [dot(normal, p) for p in pts]
        if all(v <= offset for v in values):
            pass
        elif all(v >= offset for v in values):
            normal = tuple(-a for a in normal)
            offset = -offset
        else:
            continue
        facets.add(HalfSpace(normal, offset))
    facets = tuple(sorted(facets))

    vertices = []
    for p in pts:
        tight = [h.normal for h in facets if h.tight(p)]
        if len(tight) >= d and rank(tight) == d:
            vertices.append(p)
    return RationalPolytope(n, tuple(vertices), equalities, facets)


def contains(P: RationalPolytope, x: Sequence) -> bool:
    if len(x) != P.ambient_dim:
        raise DimensionMismatchError(f"point of length {len(x)} in R^{P.ambient_dim}")
    x = [Fraction(c) for c in x]
    return all(h.satisfied(x) for h in P.constraints)


def contains_polytope(P: RationalPolytope, Q: RationalPolytope) -> bool:
    """True iff Q is a subset of P."""
    return all(contains(P, v) for v in Q.vertices)


def affine_image(f: AffZMap, P: RationalPolytope) -> RationalPolytope:
    if f.dim != P.ambient_dim:
        raise DimensionMismatchError("map and polytope dimensions differ")
    return from_points([affz_apply(f, v) for v in P.vertices])


def bounding_box(P: RationalPolytope) -> List[Tuple[Fraction, Fraction]]:
    return [
        (min(v[i] for v in P.vertices), max(v[i] for v in P.vertices))
        for i in range(P.ambient_dim)
    ]


def _boxes_disjoint(P: RationalPolytope, Q: RationalPolytope) -> bool:
    return any(
        hi1 < lo2 or hi2 < lo1
        for (lo1, hi1), (lo2, hi2) in zip(bounding_box(P), bounding_box(Q))
    )


def vertices_of_system(constraints: Sequence[HalfSpace], n: int) -> List[QVector]:
    """Feasible basic solutions of a bounded constraint system in R^n."""
    found = set()
    normals = [h.normal for h in constraints]
    for idx in combinations(range(len(constraints)), n):
        x = solve_linear([normals[i] for i in idx], [constraints[i].offset for i in idx])
        if x is None or x in found:
            continue
        if all(h.satisfied(x) for h in constraints):
            found.add(x)
    return sorted(found)


def intersect(P: RationalPolytope, Q: RationalPolytope) -> Optional[RationalPolytope]:
    """P ∩ Q, or None when the intersection is empty."""
    if P.ambient_dim != Q.ambient_dim:
        raise DimensionMismatchError("polytopes live in different dimensions")
    if P == Q:
        return P
    if _boxes_disjoint(P, Q):
        return None
    if all(contains(Q, v) for v in P.vertices):
        return P
    if all(contains(P, v) for v in Q.vertices):
        return Q
    points = vertices_of_system(P.constraints + Q.constraints, P.ambient_dim)
    if not points:
        return None
    return from_points(points)


def _fan_simplices(vertices: Sequence[QVector]) -> List[Tuple[QVector, ...]]:
    face = from_points(vertices)
    if face.affine_dim == 0:
        return [(face.vertices[0],)]
    apex = face.vertices[0]
    out = []
    for facet in face.facets:
        if facet.tight(apex):
            continue
        sub = [v for v in face.vertices if facet.tight(v)]
        for simplex in _fan_simplices(sub):
            out.append((apex,) + simplex)
    return out


def triangulate(P: RationalPolytope) -> List[Tuple[QVector, ...]]:
    """Fan triangulation from the lexicographically smallest vertex, recursively on facets."""
    return _fan_simplices(P.vertices)


def volume(P: RationalPolytope) -> Fraction:
    """Exact n-dimensional Lebesgue volume (0 for lower-dimensional P)."""
    n = P.ambient_dim
    if P.affine_dim < n:
        return Fraction(0)
    total = Fraction(0)
    for simplex in triangulate(P):
        apex = simplex[0]
        rows = [[a - b for a, b in zip(v, apex)] for v in simplex[1:]]
        scale = 1
        for row in rows:
            for c in row:
                scale = math.lcm(scale, c.denominator)
        det = determinant([[int(c * scale) for c in row] for row in rows])
        total += Fraction(abs(det), scale**n)
    return total / math.factorial(n)


def box(lower: Sequence, upper: Sequence) -> RationalPolytope:
    """Axis-parallel box with the given corners."""
    lower = [parse_rational(c) for c in lower]
    upper = [parse_rational(c) for c in upper]
    corners = [[]]
    for lo, hi in zip(lower, upper):
        corners = [c + [v] for c in corners for v in (lo, hi)]
    return from_points(corners)


def simplex(n: int) -> RationalPolytope:
    """The standard simplex conv{0, e_1, ..., e_n}."""
    pts = [[0] * n] + [[int(i == j) for j in range(n)] for i in range(n)]
    return from_points(pts)
