"""Compact integral-integral affine manifolds as complexes of glued rational polytopes.

Two input modes are supported:

* ``facet-glued``: chart polytopes with disjoint interiors, identified along
  lower-dimensional boundary pieces (a torus as one box with opposite facets
  glued);
* ``overlap-cover``: chart polytopes overlapping in full-dimensional regions,
  with one gluing per connected overlap component.

Lattice counts are computed by identifying points across gluings with a
union-find structure and, for overlap covers, independently by
inclusion-exclusion over the cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, partial
from itertools import combinations
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from scipy.cluster.hierarchy import DisjointSet

from .arith import AffZMap, NotAffZError, QVector, affz_compose, format_rational
from .lattice import (
    FitValidationError,
    QuasiPolynomial,
    count,
    enumerate_scaled,
    fit_quasi_polynomial,
)
from .parallel import ordered_map
from .polytope import (
    RationalPolytope,
    affine_image,
    contains_polytope,
    intersect,
    volume,
)

FACET_GLUED = "facet-glued"
OVERLAP_COVER = "overlap-cover"
MODES = (FACET_GLUED, OVERLAP_COVER)


class GluingError(RuntimeError):
    """Gluing data maps a lattice point outside the target chart or off the lattice."""


class TransportError(RuntimeError):
    """An intersection could not be carried into a common chart."""


class InvalidComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Gluing:
    """Identify ``region`` (in chart ``source``) with its image under ``map`` in chart ``target``."""

    source: int
    region: RationalPolytope
    map: AffZMap
    target: int

    @cached_property
    def image(self) -> RationalPolytope:
        return affine_image(self.map, self.region)

    def reverse(self) -> "Gluing":
        return Gluing(self.target, self.image, self.map.inverse(), self.source)


@dataclass(frozen=True)
class AffineComplex:
    ambient_dim: int
    charts: Tuple[RationalPolytope, ...]
    gluings: Tuple[Gluing, ...] = ()
    mode: str = FACET_GLUED
    name: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        object.__setattr__(self, "charts", tuple(self.charts))
        object.__setattr__(self, "gluings", tuple(self.gluings))
        if not self.charts:
            raise ValueError("a complex needs at least one chart")
        for P in self.charts:
            if P.ambient_dim != self.ambient_dim:
                raise ValueError("chart dimension differs from the complex dimension")

    @cached_property
    def normalized_gluings(self) -> Tuple[Gluing, ...]:
        """Gluings closed under reversal (a missing reverse is added)."""
        out = list(self.gluings)
        present = set(out)
        for g in self.gluings:
            rev = g.reverse()
            if rev not in present:
                out.append(rev)
                present.add(rev)
        return tuple(out)

    @property
    def period(self) -> int:
        out = 1
        for P in self.charts:
            out = math.lcm(out, P.denominator_lcm)
        return out

    def without_gluing(self, index: int) -> "AffineComplex":
        gl = self.gluings[:index] + self.gluings[index + 1:]
        return AffineComplex(self.ambient_dim, self.charts, gl, self.mode, self.name)


class ManifoldPoint(NamedTuple):
    chart: int
    coords: QVector

    def __str__(self):
        return f"[{self.chart}](" + ", ".join(format_rational(c) for c in self.coords) + ")"


class PointClass(NamedTuple):
    representative: ManifoldPoint
    members: Tuple[ManifoldPoint, ...]


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": list(self.violations), "warnings": list(self.warnings)}


def _gluings_by_pair(gluings: Sequence[Gluing]) -> Dict[Tuple[int, int], List[Gluing]]:
    out: Dict[Tuple[int, int], List[Gluing]] = {}
    for g in gluings:
        out.setdefault((g.source, g.target), []).append(g)
    return out


def _in_one_facet(P: RationalPolytope, Q: RationalPolytope) -> bool:
    return any(all(h.tight(v) for v in Q.vertices) for h in P.facets)


def validate(C) -> ValidationReport:
    """Check the invariants of a complex; ``C`` may also be the raw dict form.

    Nothing is raised for bad data: every problem is listed in the report.
    """
    report = ValidationReport()
    if isinstance(C, dict):
        from .io import complex_from_dict

        try:
            C = complex_from_dict(C)
        except (NotAffZError, ValueError, KeyError, TypeError) as exc:
            report.violations.append(f"cannot build complex: {exc}")
            return report

    n = C.ambient_dim
    k = len(C.charts)
    for idx, g in enumerate(C.gluings):
        tag = f"gluing {idx} ({g.source}->{g.target})"
        if not (0 <= g.source < k and 0 <= g.target < k):
            report.violations.append(f"{tag}: chart index out of range")
            continue
        if g.region.ambient_dim != n or g.map.dim != n:
            report.violations.append(f"{tag}: dimension mismatch")
            continue
        if not contains_polytope(C.charts[g.source], g.region):
            report.violations.append(f"{tag}: region not contained in source chart {g.source}")
        if not contains_polytope(C.charts[g.target], g.image):
            report.violations.append(f"{tag}: image of region not contained in target chart {g.target}")
        if C.mode == FACET_GLUED:
            if g.region.affine_dim >= n:
                report.violations.append(
                    f"{tag}: full-dimensional region in facet-glued mode (interiors must stay disjoint)"
                )
            else:
                if not _in_one_facet(C.charts[g.source], g.region):
                    report.warnings.append(f"{tag}: region is not inside a facet of chart {g.source}")
                if not _in_one_facet(C.charts[g.target], g.image):
                    report.warnings.append(f"{tag}: image is not inside a facet of chart {g.target}")
        elif g.source == g.target:
            report.violations.append(f"{tag}: chart glued to itself in overlap-cover mode")
    if report.violations:
        return report

    if C.mode == OVERLAP_COVER:
        _check_overlap_structure(C, report)
    else:
        _flag_interior_identifications(C, report)
    return report


def _flag_interior_identifications(C: AffineComplex, report: ValidationReport) -> None:
    # boundary gluings should never touch interior lattice points; if they do,
    # the quotient is probably not a manifold (reported, not decided)
    m = C.period
    try:
        ds = _identify(C, m)
    except GluingError:
        return
    for subset in ds.subsets():
        if len(subset) < 2:
            continue
        for i, y in sorted(subset):
            P = C.charts[i]
            x = tuple(Fraction(c, m) for c in y)
            if P.is_full_dimensional and not any(h.tight(x) for h in P.facets):
                report.warnings.append(
                    f"interior point {ManifoldPoint(i, x)} is identified with another point "
                    f"at m={m}; the quotient may not be a manifold"
                )
                break


def _check_overlap_structure(C: AffineComplex, report: ValidationReport) -> None:
    supplied = _gluings_by_pair(C.gluings)
    for (i, j), group in supplied.items():
        for a, b in combinations(range(len(group)), 2):
            if intersect(group[a].region, group[b].region) is not None:
                report.violations.append(
                    f"overlap components {a} and {b} of charts {i}->{j} are not disjoint"
                )
        for g in group:
            for r in supplied.get((j, i), []):
                if r == g.reverse():
                    continue
                if intersect(r.region, g.image) is not None:
                    report.violations.append(
                        f"reverse gluing {j}->{i} overlapping the image of {i}->{j} is not its inverse"
                    )
    if report.violations:
        return

    pairs = _gluings_by_pair(C.normalized_gluings)
    for (i, j), first in pairs.items():
        for g1 in first:
            for (j2, k), second in pairs.items():
                if j2 != j:
                    continue
                for g2 in second:
                    overlap = intersect(g1.image, g2.region)
                    if overlap is None:
                        continue
                    pulled = affine_image(g1.map.inverse(), overlap)
                    composite = affz_compose(g2.map, g1.map)
                    if k == i:
                        if not composite.is_identity():
                            report.violations.append(
                                f"cocycle: {i}->{j}->{i} is not the identity on a nonempty overlap"
                            )
                        continue
                    matches = [
                        g3 for g3 in pairs.get((i, k), [])
                        if intersect(g3.region, pulled) is not None
                    ]
                    if not any(g3.map == composite and contains_polytope(g3.region, pulled) for g3 in matches):
                        report.violations.append(
                            f"cocycle: composing {i}->{j} and {j}->{k} disagrees with the {i}->{k} transition"
                        )


# ---------------------------------------------------------------------------
# counting


def _identify(C: AffineComplex, m: int) -> DisjointSet:
    if m < 1:
        raise ValueError("dilation factor m must be >= 1")
    ds = DisjointSet()
    for i, P in enumerate(C.charts):
        for y in enumerate_scaled(P, m):
            ds.add((i, y))
    for g in C.normalized_gluings:
        for y in enumerate_scaled(g.region, m):
            a = (g.source, y)
            b = (g.target, g.map.apply_integer(y, m))
            if a not in ds:
                raise GluingError(f"lattice point {y}/{m} of a gluing region lies outside chart {g.source}")
            if b not in ds:
                raise GluingError(
                    f"gluing {g.source}->{g.target} sends lattice point {y}/{m} outside chart {g.target}"
                )
            ds.merge(a, b)
    return ds


def integral_points(C: AffineComplex, m: int) -> List[PointClass]:
    """Classes of identified points of (1/m) Z^n, sorted by canonical representative."""
    ds = _identify(C, m)
    classes = []
    for subset in ds.subsets():
        members = tuple(
            ManifoldPoint(i, tuple(Fraction(c, m) for c in y)) for i, y in sorted(subset)
        )
        classes.append(PointClass(members[0], members))
    classes.sort()
    return classes


def count_union_find(C: AffineComplex, m: int) -> int:
    """L_M(m): the number of points of M with coordinates in (1/m) Z^n."""
    return _identify(C, m).n_subsets


class CoverTerm(NamedTuple):
    indices: Tuple[int, ...]
    chart: int
    piece: RationalPolytope

    @property
    def sign(self) -> int:
        return 1 if len(self.indices) % 2 else -1


@dataclass
class InclusionExclusionCount:
    """``m -> sum_I (-1)^(|I|+1) #((1/m) Z^n ∩ P_I)``; ``terms`` is the audit trail."""

    terms: List[CoverTerm]

    def __call__(self, m: int) -> int:
        return sum(t.sign * count(t.piece, m) for t in self.terms)

    def volume(self) -> Fraction:
        return sum((t.sign * volume(t.piece) for t in self.terms), Fraction(0))


def cover_terms(C: AffineComplex) -> List[CoverTerm]:
    """All nonempty P_I, each as disjoint pieces in the coordinates of chart min(I).

    A piece of P_I is the intersection, inside chart min(I), of one overlap
    component with each other member of I. Components of one chart pair are
    disjoint, so the pieces of P_I are disjoint too.
    """
    if C.mode != OVERLAP_COVER:
        raise ValueError("inclusion-exclusion needs an overlap-cover complex")
    pairs = _gluings_by_pair(C.normalized_gluings)
    k = len(C.charts)
    for (i, j) in pairs:
        if (j, i) not in pairs:
            raise TransportError(f"no transition from chart {j} back to chart {i}")
    terms: List[CoverTerm] = []

    def extend(indices, pieces):
        base = indices[0]
        for piece in pieces:
            terms.append(CoverTerm(indices, base, piece))
        for t in range(indices[-1] + 1, k):
            new = []
            for piece in pieces:
                for g in pairs.get((base, t), []):
                    x = intersect(piece, g.region)
                    if x is not None:
                        new.append(x)
            if new:
                extend(indices + (t,), new)

    for i, P in enumerate(C.charts):
        extend((i,), [P])
    return terms


def count_inclusion_exclusion(C: AffineComplex) -> InclusionExclusionCount:
    return InclusionExclusionCount(cover_terms(C))


def complex_volume(C: AffineComplex) -> Fraction:
    if C.mode == FACET_GLUED:
        return sum((volume(P) for P in C.charts), Fraction(0))
    return count_inclusion_exclusion(C).volume()


def manifold_ehrhart(
    C: AffineComplex, period_hint: Optional[int] = None, workers: int = 1, counter=None
):
    """Fit and validate the quasi-polynomial m -> L_M(m); returns a LatticeCountReport."""
    period = period_hint if period_hint is not None else C.period
    counter = counter or partial(count_union_find, C)
    return fit_quasi_polynomial(counter, C.ambient_dim, period, workers=workers)


# ---------------------------------------------------------------------------
# verification


class VerificationRow(NamedTuple):
    m: int
    count: int
    expected: Fraction
    ok: bool


@dataclass
class VerificationReport:
    name: str
    dim: int
    volume: Fraction
    rows: List[VerificationRow]
    fitted: Optional[QuasiPolynomial]
    difference_is_zero: bool
    validation: ValidationReport
    fit_error: str = ""

    @property
    def passed(self) -> bool:
        return self.validation.valid and self.difference_is_zero and all(r.ok for r in self.rows)

    @property
    def first_failure(self) -> Optional[int]:
        return next((r.m for r in self.rows if not r.ok), None)

    def theorem_line(self) -> str:
        if not self.rows:
            return "#M_Z not computed"
        first = self.rows[0]
        vol = format_rational(self.volume)
        if first.ok:
            return f"#M_Z = {first.count} = vol(M)"
        return f"#M_Z = {first.count} != {vol} = vol(M)"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "volume": format_rational(self.volume),
            "status": "PASS" if self.passed else "FAIL",
            "theorem": self.theorem_line(),
            "rows": [
                {
                    "m": r.m,
                    "count": r.count,
                    "expected": format_rational(r.expected),
                    "status": "PASS" if r.ok else "FAIL",
                }
                for r in self.rows
            ],
            "fitted": self.fitted.to_dict() if self.fitted is not None else None,
            "difference_is_zero": self.difference_is_zero,
            "fit_error": self.fit_error,
            "validation": self.validation.to_dict(),
        }

    def render_text(self) -> str:
        lines = [f"complex: {self.name or '<unnamed>'}  dim={self.dim}  vol(M)={format_rational(self.volume)}"]
        for v in self.validation.violations:
            lines.append(f"  violation: {v}")
        for w in self.validation.warnings:
            lines.append(f"  warning: {w}")
        if self.rows:
            width = max(len(str(r.count)) for r in self.rows)
            width = max(width, len("L_M(m)"))
            lines.append(f"{'m':>4}  {'L_M(m)':>{width}}  {'vol*m^n':>{width}}  status")
            for r in self.rows:
                lines.append(
                    f"{r.m:>4}  {r.count:>{width}}  {format_rational(r.expected):>{width}}  "
                    + ("PASS" if r.ok else "FAIL")
                )
        if self.fitted is not None:
            lines.append("fitted: " + str(self.fitted))
            lines.append(
                "L_M(m) - vol(M) m^n is "
                + ("identically zero" if self.difference_is_zero else "NOT identically zero")
            )
        if self.fit_error:
            lines.append(f"fit failed: {self.fit_error}")
        lines.append(self.theorem_line())
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def verify_downstairs(C: AffineComplex, m_max: int = 10, workers: int = 1) -> VerificationReport:
    """Check L_M(m) = vol(M) m^n for m <= m_max and as an identity of quasi-polynomials."""
    validation = validate(C)
    n = C.ambient_dim
    if not validation.valid:
        return VerificationReport(C.name, n, Fraction(0), [], None, False, validation)
    needed = (n + 2) * C.period
    if m_max < needed:
        raise ValueError(f"m_max must be at least (n+2)*period = {needed}")

    vol = complex_volume(C)
    cache: Dict[int, int] = {}

    def counter(m):
        if m not in cache:
            cache[m] = count_union_find(C, m)
        return cache[m]

    ms = list(range(1, m_max + 1))
    for m, c in zip(ms, ordered_map(partial(count_union_find, C), ms, workers)):
        cache[m] = c
    rows = [VerificationRow(m, cache[m], vol * m**n, cache[m] == vol * m**n) for m in ms]

    fitted = None
    fit_error = ""
    diff_zero = False
    try:
        fitted = manifold_ehrhart(C, counter=counter).fitted
        diff_zero = (fitted - QuasiPolynomial.monomial(vol, n)).is_zero()
    except FitValidationError as exc:
        fit_error = str(exc)
    return VerificationReport(C.name, n, vol, rows, fitted, diff_zero, validation, fit_error)


# ---------------------------------------------------------------------------
# re-coordinatization


def recoordinatize(C: AffineComplex, chart: int, f: AffZMap) -> AffineComplex:
    """Replace chart ``chart`` by its image under ``f`` and conjugate incident gluings."""
    f_inv = f.inverse()
    charts = list(C.charts)
    charts[chart] = affine_image(f, charts[chart])
    gluings = []
    for g in C.gluings:
        region, mp = g.region, g.map
        if g.source == chart:
            region = affine_image(f, region)
            mp = affz_compose(mp, f_inv)
        if g.target == chart:
            mp = affz_compose(f, mp)
        gluings.append(Gluing(g.source, region, mp, g.target))
    return AffineComplex(C.ambient_dim, tuple(charts), tuple(gluings), C.mode, C.name)
