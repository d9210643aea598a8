"""Lattice-point enumeration, Ehrhart quasi-polynomial fitting and quasi-polynomial algebra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .arith import format_rational, parse_rational, solve_linear
from .parallel import ordered_map
from .polytope import RationalPolytope, from_points


class FitValidationError(RuntimeError):
    """A fitted quasi-polynomial disagrees with an exact count outside its fitting window."""


# ---------------------------------------------------------------------------
# enumeration

# One integer constraint per row: coeffs . y <= m * rhs (or == for equalities),
# where y = m * x is the scaled integer point.
_Row = Tuple[Tuple[int, ...], int, bool]


def _integer_rows(P: RationalPolytope) -> List[_Row]:
    rows = []
    for h in P.constraints:
        den = h.offset.denominator
        rows.append((tuple(den * a for a in h.normal), h.offset.numerator, h.equality))
    return rows


def _slice_levels(P: RationalPolytope) -> List[List[_Row]]:
    """Constraint rows of the projections of P onto its first 1, 2, ..., n coordinates.

    The projection onto the first j+1 coordinates describes exactly which
    values of coordinate j extend a feasible prefix, so every slice visited
    during enumeration is nonempty over the reals.
    """
    cached = P.__dict__.get("_slice_levels")
    if cached is not None:
        return cached
    n = P.ambient_dim
    levels = []
    for j in range(n - 1):
        proj = from_points([v[: j + 1] for v in P.vertices])
        levels.append(_integer_rows(proj))
    levels.append(_integer_rows(P))
    P.__dict__["_slice_levels"] = levels
    return levels


def _interval(rows: List[_Row], level: int, prefix: Sequence[int], m: int):
    lo = hi = None
    for coeffs, num, eq in rows:
        c = coeffs[level]
        r = m * num
        for a, y in zip(coeffs, prefix):
            r -= a * y
        if eq:
            if c == 0:
                if r != 0:
                    return None
                continue
            if r % c:
                return None
            v = r // c
            lo = v if lo is None else max(lo, v)
            hi = v if hi is None else min(hi, v)
        elif c > 0:
            v = r // c
            hi = v if hi is None else min(hi, v)
        elif c < 0:
            v = -((-r) // c)
            lo = v if lo is None else max(lo, v)
        elif r < 0:
            return None
    if lo is None or hi is None:
        raise ValueError("unbounded slice; polytope description is inconsistent")
    if lo > hi:
        return None
    return lo, hi


_INT64_SAFE = 2**62
# below this many candidate points the array overhead outweighs the win
_VECTORIZE_FROM = 256


def _use_numpy(P: RationalPolytope, levels: List[List[_Row]], m: int) -> bool:
    """Small boxes go to the plain slicer; large ones to numpy if int64 is safe."""
    box_points = 1
    for j in range(P.ambient_dim):
        coords = [v[j] for v in P.vertices]
        box_points *= int(m * (max(coords) - min(coords))) + 1
    if box_points < _VECTORIZE_FROM:
        return False
    return _fits_int64(P, levels, m)


def _fits_int64(P: RationalPolytope, levels: List[List[_Row]], m: int) -> bool:
    """Whether every intermediate of the vectorized slicer stays far inside int64."""
    reach = m * max(abs(c) for v in P.vertices for c in v) + 1
    if (2 * reach + 1) ** P.ambient_dim >= _INT64_SAFE:
        return False
    for rows in levels:
        for coeffs, num, _ in rows:
            if m * abs(num) + sum(abs(a) for a in coeffs) * reach >= _INT64_SAFE:
                return False
    return True


def _interval_arrays(rows: List[_Row], level: int, prefix: np.ndarray, m: int):
    size = prefix.shape[0]
    lo = np.full(size, np.iinfo(np.int64).min // 4, dtype=np.int64)
    hi = np.full(size, np.iinfo(np.int64).max // 4, dtype=np.int64)
    empty = np.zeros(size, dtype=bool)
    for coeffs, num, eq in rows:
        c = coeffs[level]
        r = np.full(size, m * num, dtype=np.int64)
        if level:
            r -= prefix @ np.asarray(coeffs[:level], dtype=np.int64)
        if eq:
            if c == 0:
                empty |= r != 0
                continue
            empty |= (r % c) != 0
            v = r // c
            np.maximum(lo, v, out=lo)
            np.minimum(hi, v, out=hi)
        elif c > 0:
            np.minimum(hi, r // c, out=hi)
        elif c < 0:
            np.maximum(lo, -((-r) // c), out=lo)
        else:
            empty |= r < 0
    hi[empty] = lo[empty] - 1
    return lo, hi


def _scan_numpy(levels: List[List[_Row]], n: int, m: int, points: bool):
    """Level-by-level slicing over arrays of prefixes; returns a count or an (N, n) array."""
    prefix = np.zeros((1, 0), dtype=np.int64)
    for level in range(n):
        lo, hi = _interval_arrays(levels[level], level, prefix, m)
        keep = lo <= hi
        if level == n - 1 and not points:
            return int((hi[keep] - lo[keep] + 1).sum())
        prefix, lo, hi = prefix[keep], lo[keep], hi[keep]
        sizes = hi - lo + 1
        total = int(sizes.sum())
        owner = np.repeat(np.arange(prefix.shape[0]), sizes)
        starts = np.cumsum(sizes) - sizes
        column = lo[owner] + (np.arange(total) - starts[owner])
        prefix = np.column_stack([prefix[owner], column])
    return prefix


def enumerate_scaled(P: RationalPolytope, m: int) -> Iterator[Tuple[int, ...]]:
    """Integer points of the dilation mP, in lexicographic order."""
    if m < 1:
        raise ValueError("dilation factor m must be >= 1")
    levels = _slice_levels(P)
    if _use_numpy(P, levels, m):
        yield from map(tuple, _scan_numpy(levels, P.ambient_dim, m, points=True).tolist())
        return
    last = P.ambient_dim - 1

    def walk(level, prefix):
        iv = _interval(levels[level], level, prefix, m)
        if iv is None:
            return
        lo, hi = iv
        if level == last:
            for x in range(lo, hi + 1):
                yield prefix + (x,)
        else:
            for x in range(lo, hi + 1):
                yield from walk(level + 1, prefix + (x,))

    yield from walk(0, ())


def enumerate_points(P: RationalPolytope, m: int) -> List[Tuple[Fraction, ...]]:
    """Points of (1/m) Z^n inside P, lexicographically ordered."""
    return [tuple(Fraction(c, m) for c in y) for y in enumerate_scaled(P, m)]


def count(P: RationalPolytope, m: int) -> int:
    """L_P(m), the number of points of (1/m) Z^n in P."""
    if m < 1:
        raise ValueError("dilation factor m must be >= 1")
    levels = _slice_levels(P)
    if _use_numpy(P, levels, m):
        return _scan_numpy(levels, P.ambient_dim, m, points=False)
    return _count_exact(levels, P.ambient_dim, m)


def _count_exact(levels: List[List[_Row]], n: int, m: int) -> int:
    """Pure big-integer slicing; the fallback when int64 could overflow."""
    last = n - 1

    def walk(level, prefix):
        iv = _interval(levels[level], level, prefix, m)
        if iv is None:
            return 0
        lo, hi = iv
        if level == last:
            return hi - lo + 1
        return sum(walk(level + 1, prefix + (x,)) for x in range(lo, hi + 1))

    return walk(0, ())


def count_many(P: RationalPolytope, ms: Sequence[int], workers: int = 1) -> List[int]:
    return ordered_map(partial(count, P), ms, workers)


# ---------------------------------------------------------------------------
# quasi-polynomials


def _divisors(s: int) -> List[int]:
    return [d for d in range(1, s + 1) if s % d == 0]


@dataclass(frozen=True)
class QuasiPolynomial:
    """``m -> sum_k coefficients[k][m mod period] * m**k``.

    Instances are canonical: trailing zero degrees are dropped and the period is
    reduced to the smallest one that describes the same coefficient table, so
    two quasi-polynomials are equal as functions iff they compare equal.
    """

    coefficients: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = [tuple(Fraction(c) for c in row) for row in self.coefficients]
        if not rows or not rows[0]:
            raise ValueError("need at least one coefficient")
        s = len(rows[0])
        if any(len(r) != s for r in rows):
            raise ValueError("all coefficient rows need the same period")
        while len(rows) > 1 and not any(rows[-1]):
            rows.pop()
        for d in _divisors(s):
            if all(row[r] == row[r % d] for row in rows for r in range(s)):
                rows = [row[:d] for row in rows]
                break
        object.__setattr__(self, "coefficients", tuple(rows))

    @classmethod
    def zero(cls) -> "QuasiPolynomial":
        return cls(((0,),))

    @classmethod
    def from_polynomial(cls, coeffs: Sequence) -> "QuasiPolynomial":
        """Period-1 quasi-polynomial from ``[c_0, c_1, ...]``."""
        return cls(tuple((c,) for c in coeffs) or ((0,),))

    @classmethod
    def monomial(cls, coefficient, degree: int) -> "QuasiPolynomial":
        return cls.from_polynomial([0] * degree + [coefficient])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def period(self) -> int:
        return len(self.coefficients[0])

    def coefficient(self, k: int, m: int) -> Fraction:
        if k > self.degree:
            return Fraction(0)
        return self.coefficients[k][m % self.period]

    def __call__(self, m: int) -> Fraction:
        return quasipoly_eval(self, m)

    def __sub__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        return quasipoly_sub(self, other)

    def __neg__(self) -> "QuasiPolynomial":
        return QuasiPolynomial(tuple(tuple(-c for c in row) for row in self.coefficients))

    def __add__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        return quasipoly_sub(self, -other)

    def is_zero(self) -> bool:
        return quasipoly_is_zero(self)

    def residue_polynomial(self, r: int) -> List[Fraction]:
        return [row[r % self.period] for row in self.coefficients]

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "period": self.period,
            "coefficients": [[format_rational(c) for c in row] for row in self.coefficients],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuasiPolynomial":
        rows = tuple(tuple(parse_rational(c) for c in row) for row in data["coefficients"])
        q = cls(rows)
        if "period" in data and len(rows[0]) != int(data["period"]):
            raise ValueError("period does not match the coefficient table")
        return q

    def __str__(self):
        return render_quasi_polynomial(self)


def quasipoly_eval(q: QuasiPolynomial, m: int) -> Fraction:
    r = m % q.period
    out = Fraction(0)
    for row in reversed(q.coefficients):
        out = out * m + row[r]
    return out


def quasipoly_sub(q1: QuasiPolynomial, q2: QuasiPolynomial) -> QuasiPolynomial:
    s = math.lcm(q1.period, q2.period)
    degree = max(q1.degree, q2.degree)
    rows = tuple(
        tuple(q1.coefficient(k, r) - q2.coefficient(k, r) for r in range(s))
        for k in range(degree + 1)
    )
    return QuasiPolynomial(rows)


def quasipoly_is_zero(q: QuasiPolynomial) -> bool:
    # Each residue class restricts to a polynomial in m; it vanishes identically
    # iff all its coefficients do.
    return all(c == 0 for row in q.coefficients for c in row)


def _poly_terms(coeffs: Sequence[Fraction], var: str = "m") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = format_rational(a)
        else:
            power = var if k == 1 else f"{var}^{k}"
            if a == 1:
                body = power
            elif a.denominator == 1:
                body = f"{a}{power}"
            else:
                body = f"({format_rational(a)}){power}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def render_quasi_polynomial(q: QuasiPolynomial, name: str = "L") -> str:
    if q.period == 1:
        return f"{name}(m) = {_poly_terms(q.residue_polynomial(0))}"
    lines = [f"{name}(m) quasi-polynomial of degree {q.degree}, period {q.period}:"]
    for r in range(q.period):
        lines.append(f"  m = {r} mod {q.period}: {_poly_terms(q.residue_polynomial(r))}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# fitting


@dataclass
class LatticeCountReport:
    counts: Dict[int, int]
    fitted: QuasiPolynomial
    validated_up_to: int
    fit_window: Dict[int, List[int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "counts": {str(m): c for m, c in sorted(self.counts.items())},
            "fitted": self.fitted.to_dict(),
            "validated_up_to": self.validated_up_to,
        }


def sample_schedule(degree: int, period: int, n_validate: Optional[int] = None) -> Dict[int, List[int]]:
    """Per residue r, the sampled dilations m = r (mod period): degree+1 to fit, the rest to validate."""
    if n_validate is None:
        n_validate = degree + 2
    total = degree + 1 + n_validate
    schedule = {}
    for r in range(period):
        first = r if r >= 1 else period
        schedule[r] = [first + period * t for t in range(total)]
    return schedule


def fit_quasi_polynomial(
    counter: Callable[[int], int],
    degree: int,
    period: int,
    n_validate: Optional[int] = None,
    workers: int = 1,
) -> LatticeCountReport:
    """Interpolate a quasi-polynomial through exact counts, then validate it on extra samples."""
    if period < 1:
        raise ValueError("period must be >= 1")
    schedule = sample_schedule(degree, period, n_validate)
    needed = sorted({m for ms in schedule.values() for m in ms})
    counts = dict(zip(needed, ordered_map(counter, needed, workers)))

    table = [[Fraction(0)] * period for _ in range(degree + 1)]
    for r, ms in schedule.items():
        fit_ms = ms[: degree + 1]
        vander = [[Fraction(m) ** k for k in range(degree + 1)] for m in fit_ms]
        sol = solve_linear(vander, [counts[m] for m in fit_ms])
        for k, c in enumerate(sol):
            table[k][r] = c
    fitted = QuasiPolynomial(tuple(tuple(row) for row in table))
    for m in needed:
        if fitted(m) != counts[m]:
            raise FitValidationError(
                f"fitted quasi-polynomial gives {fitted(m)} at m={m}, exact count is {counts[m]}"
            )
    return LatticeCountReport(counts, fitted, max(needed), schedule)


def default_period(P: RationalPolytope) -> int:
    return P.denominator_lcm


def ehrhart_report(
    P: RationalPolytope,
    period_hint: Optional[int] = None,
    n_validate: Optional[int] = None,
    workers: int = 1,
) -> LatticeCountReport:
    period = period_hint if period_hint is not None else default_period(P)
    return fit_quasi_polynomial(partial(count, P), P.ambient_dim, period, n_validate, workers)


def ehrhart_fit(
    P: RationalPolytope, period_hint: Optional[int] = None, workers: int = 1
) -> QuasiPolynomial:
    """Ehrhart quasi-polynomial of P, fitted from exact counts and validated."""
    return ehrhart_report(P, period_hint, workers=workers).fitted
