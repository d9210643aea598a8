"""Exact rational and integer linear algebra, and integral-integral affine maps.

Scalars are :class:`fractions.Fraction` (arbitrary precision, always in lowest
terms). Vectors are tuples of Fractions, integer matrices are tuples of integer
tuples.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

Rational = Fraction
QVector = Tuple[Fraction, ...]
ZMatrix = Tuple[Tuple[int, ...], ...]

_RATIONAL_RE = re.compile(r"^\s*([+\-−]?)\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


class NotAffZError(ValueError):
    """Raised when a (linear, translation) pair is not in Aff_Z(R^n)."""


class DimensionMismatchError(ValueError):
    pass


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or ``"-p/q"`` into a Fraction.

    Integers and Fractions pass through unchanged. A zero denominator, a float
    or any other syntax raises ``ValueError``.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rationals must be strings or integers, got {text!r}")
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ValueError(f"malformed rational {text!r}")
    sign, num, den = match.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    value = Fraction(int(num), int(den) if den is not None else 1)
    return -value if sign in ("-", "−") else value


def format_rational(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def qvector(values: Iterable) -> QVector:
    return tuple(parse_rational(v) for v in values)


def to_integer(value) -> int:
    """Return ``value`` as an int, raising ``ValueError`` if it is not integral."""
    if isinstance(value, bool):
        raise ValueError(f"not an integer: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        value = parse_rational(value)
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise ValueError(f"not an integer: {value!r}")


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def primitive_integer(vector: Sequence) -> Tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector (same direction)."""
    vector = [Fraction(v) for v in vector]
    scale = lcm_of_denominators(vector)
    ints = [int(v * scale) for v in vector]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# integer matrices


def as_zmatrix(rows) -> ZMatrix:
    matrix = tuple(tuple(to_integer(x) for x in row) for row in rows)
    if any(len(row) != len(matrix) for row in matrix):
        raise ValueError("matrix must be square")
    return matrix


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(matrix: Sequence[Sequence[int]]) -> bool:
    """True iff the square integer matrix lies in GL_n(Z)."""
    return determinant(matrix) in (1, -1)


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[QVector]:
    """Solve ``matrix @ x = rhs`` exactly; return None when the matrix is singular.

    Rows are cleared of denominators first so that the forward elimination is
    fraction-free (Bareiss); only the back substitution uses Fractions.
    """
    n = len(matrix)
    if len(rhs) != n or any(len(row) != n for row in matrix):
        raise DimensionMismatchError("solve_linear needs a square system")
    aug = []
    for row, b in zip(matrix, rhs):
        entries = [Fraction(x) for x in row] + [Fraction(b)]
        scale = lcm_of_denominators(entries)
        aug.append([int(x * scale) for x in entries])
    prev = 1
    for k in range(n):
        if aug[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if aug[i][k] != 0), None)
            if swap is None:
                return None
            aug[k], aug[swap] = aug[swap], aug[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                aug[i][j] = (aug[i][j] * aug[k][k] - aug[i][k] * aug[k][j]) // prev
            aug[i][k] = 0
        prev = aug[k][k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(aug[i][n]) - sum(aug[i][j] * x[j] for j in range(i + 1, n))
        x[i] = acc / aug[i][i]
    return tuple(x)


def rref(rows: Sequence[Sequence]) -> Tuple[list, list]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        a[r] = [x / lead for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of {x : rows @ x = 0} as primitive integer vectors, in RREF order."""
    reduced, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(primitive_integer(v))
    return basis


# ---------------------------------------------------------------------------
# Aff_Z(R^n)


@dataclass(frozen=True)
class AffZMap:
    """The integral-integral affine map ``x -> linear @ x + translation``.

    The linear part must be in GL_n(Z) and the translation in Z^n; anything
    else raises :class:`NotAffZError` at construction.
    """

    linear: ZMatrix
    translation: Tuple[int, ...]

    def __post_init__(self):
        try:
            linear = as_zmatrix(self.linear)
        except ValueError as exc:
            raise NotAffZError(f"linear part is not an integer matrix: {exc}") from None
        try:
            translation = tuple(to_integer(x) for x in self.translation)
        except ValueError as exc:
            raise NotAffZError(f"translation is not integral: {exc}") from None
        if len(translation) != len(linear):
            raise NotAffZError("translation length differs from matrix size")
        if not is_unimodular(linear):
            raise NotAffZError(f"det of linear part is {determinant(linear)}, not +-1")
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "translation", translation)

    @classmethod
    def identity(cls, n: int) -> "AffZMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (0,) * n)

    @classmethod
    def translate(cls, shift: Sequence[int]) -> "AffZMap":
        return cls(cls.identity(len(shift)).linear, tuple(shift))

    @property
    def dim(self) -> int:
        return len(self.translation)

    def __call__(self, x: Sequence) -> QVector:
        return affz_apply(self, x)

    def apply_integer(self, y: Sequence[int], m: int) -> Tuple[int, ...]:
        """Image of the point ``y / m`` scaled back by ``m``; stays in integers."""
        return tuple(
            sum(a * c for a, c in zip(row, y)) + m * b
            for row, b in zip(self.linear, self.translation)
        )

    def compose(self, inner: "AffZMap") -> "AffZMap":
        return affz_compose(self, inner)

    def inverse(self) -> "AffZMap":
        return affz_invert(self)

    def is_identity(self) -> bool:
        return self == AffZMap.identity(self.dim)


def affz_apply(f: AffZMap, x: Sequence) -> QVector:
    if len(x) != f.dim:
        raise DimensionMismatchError(f"map acts on R^{f.dim}, point has length {len(x)}")
    x = [Fraction(v) for v in x]
    return tuple(b + dot(row, x) for row, b in zip(f.linear, f.translation))


def affz_compose(g: AffZMap, f: AffZMap) -> AffZMap:
    """The map ``x -> g(f(x))``."""
    if g.dim != f.dim:
        raise DimensionMismatchError("cannot compose maps of different dimension")
    n = f.dim
    linear = tuple(
        tuple(sum(g.linear[i][k] * f.linear[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )
    translation = tuple(
        sum(g.linear[i][k] * f.translation[k] for k in range(n)) + g.translation[i]
        for i in range(n)
    )
    return AffZMap(linear, translation)


def affz_invert(f: AffZMap) -> AffZMap:
    n = f.dim
    columns = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        columns.append(solve_linear(f.linear, e))
    inv = tuple(tuple(to_integer(columns[j][i]) for j in range(n)) for i in range(n))
    translation = tuple(-sum(inv[i][k] * f.translation[k] for k in range(n)) for i in range(n))
    return AffZMap(inv, translation)


def in_dilated_lattice(x: Sequence, m: int) -> bool:
    """True iff ``x`` lies in (1/m) Z^n."""
    return all((Fraction(v) * m).denominator == 1 for v in x)
