from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_lattice.arith import (
    AffZMap,
    DimensionMismatchError,
    NotAffZError,
    affz_apply,
    affz_compose,
    affz_invert,
    determinant,
    format_rational,
    in_dilated_lattice,
    is_unimodular,
    nullspace,
    parse_rational,
    rank,
    solve_linear,
)

I2 = [[1, 0], [0, 1]]


def test_is_unimodular_examples():
    assert is_unimodular(I2)
    assert is_unimodular([[1, 1], [0, 1]])
    assert not is_unimodular([[2, 0], [0, 1]])


def test_determinant_matches_cofactor_expansion():
    M = [[2, -1, 3], [0, 4, 1], [5, 2, -2]]
    cof = 2 * (4 * -2 - 1 * 2) - (-1) * (0 * -2 - 1 * 5) + 3 * (0 * 2 - 4 * 5)
    assert determinant(M) == cof
    assert determinant([[0, 1], [1, 0]]) == -1


def test_affz_apply_examples():
    assert affz_apply(AffZMap.identity(2), (F(1, 2), F(1, 3))) == (F(1, 2), F(1, 3))
    f = AffZMap([[1, 1], [0, 1]], (1, 0))
    assert affz_apply(f, (F(1, 2), F(1, 2))) == (2, F(1, 2))
    g = AffZMap([[-1, 0], [0, 1]], (1, 1))
    assert affz_apply(g, (0, 0)) == (1, 1)


def test_affz_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        affz_apply(AffZMap.identity(2), (1, 2, 3))


def test_affz_compose_examples():
    f = AffZMap(I2, (1, 0))
    assert affz_compose(AffZMap.identity(2), f) == f
    assert affz_compose(AffZMap(I2, (0, 1)), f) == AffZMap(I2, (1, 1))
    r = AffZMap([[-1, 0], [0, 1]], (0, 0))
    assert affz_compose(r, r).is_identity()


def test_affz_invert_examples():
    assert affz_invert(AffZMap.identity(2)) == AffZMap.identity(2)
    assert affz_invert(AffZMap(I2, (1, 0))) == AffZMap(I2, (-1, 0))
    assert affz_invert(AffZMap([[1, 1], [0, 1]], (0, 0))) == AffZMap([[1, -1], [0, 1]], (0, 0))


def test_affz_map_rejects_non_integral_data():
    with pytest.raises(NotAffZError):
        AffZMap([[2, 0], [0, 1]], (0, 0))
    with pytest.raises(NotAffZError):
        AffZMap(I2, (F(1, 2), 0))
    with pytest.raises(NotAffZError):
        AffZMap([[1, 0]], (0, 0))


def test_solve_linear_examples():
    assert solve_linear(I2, (F(1, 2), F(1, 3))) == (F(1, 2), F(1, 3))
    assert solve_linear([[2, 0], [0, 3]], (1, 1)) == (F(1, 2), F(1, 3))
    assert solve_linear([[1, 1], [1, 1]], (1, 5)) is None


def test_rank_and_nullspace():
    rows = [[1, 2, 3], [2, 4, 6]]
    assert rank(rows) == 1
    basis = nullspace(rows, 3)
    assert len(basis) == 2
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


@pytest.mark.parametrize(
    "text, value",
    [("3", F(3)), ("-1/2", F(-1, 2)), ("−2/4", F(-1, 2)), (" 6/3 ", F(2)), (5, F(5))],
)
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1/0", "0.5", "abc", "1/-2", "", 0.5])
def test_parse_rational_rejects(text):
    with pytest.raises((ValueError, TypeError)):
        parse_rational(text)


def test_format_rational():
    assert format_rational(F(3)) == "3"
    assert format_rational(F(-6, 4)) == "-3/2"


# ---- properties

small = st.integers(-4, 4)


@st.composite
def unimodular(draw, n):
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, 6))):
        if n > 1 and draw(st.booleans()):
            i, j = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
            c = draw(st.integers(-2, 2))
            A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        else:
            i = draw(st.integers(0, n - 1))
            A[i] = [-a for a in A[i]]
    return A


@st.composite
def affz_maps(draw, n):
    return AffZMap(draw(unimodular(n)), tuple(draw(st.lists(small, min_size=n, max_size=n))))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


@st.composite
def map_and_point(draw):
    n = draw(st.integers(1, 3))
    return draw(affz_maps(n)), tuple(draw(st.lists(rationals, min_size=n, max_size=n)))


@settings(max_examples=150, deadline=None)
@given(map_and_point(), st.integers(1, 12))
def test_lattice_membership_is_preserved(fx, m):
    f, x = fx
    assert in_dilated_lattice(x, m) == in_dilated_lattice(affz_apply(f, x), m)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(affz_maps(n), affz_maps(n))), st.data())
def test_compose_and_invert(gf, data):
    g, f = gf
    x = tuple(data.draw(st.lists(rationals, min_size=f.dim, max_size=f.dim)))
    assert affz_compose(affz_invert(f), f).is_identity()
    assert affz_compose(f, affz_invert(f)).is_identity()
    assert affz_apply(affz_compose(g, f), x) == affz_apply(g, affz_apply(f, x))


@given(st.integers(-10**30, 10**30), st.integers(1, 10**20), st.integers(-10**30, 10**30), st.integers(1, 10**20))
def test_rational_arithmetic_against_cross_multiplication(a, b, c, d):
    from math import gcd

    s, p = F(a, b) + F(c, d), F(a, b) * F(c, d)
    assert s.denominator > 0 and gcd(s.numerator, s.denominator) == 1
    assert s.numerator * b * d == (a * d + c * b) * s.denominator
    assert p.numerator * b * d == a * c * p.denominator
    assert parse_rational(format_rational(s)) == s
