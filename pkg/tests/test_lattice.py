import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_lattice.lattice import (
    FitValidationError,
    QuasiPolynomial,
    count,
    count_many,
    ehrhart_fit,
    ehrhart_report,
    enumerate_points,
    fit_quasi_polynomial,
    quasipoly_eval,
    quasipoly_is_zero,
    quasipoly_sub,
    render_quasi_polynomial,
)
from affine_lattice.polytope import box, contains, from_points, intersect, simplex, volume
from oracles import BruteHull, box_scan, random_points

SQUARE = box((0, 0), (1, 1))
SEGMENT = from_points([[0], [1]])
HALF = from_points([[0], [F(1, 2)]])
PERIOD2 = QuasiPolynomial([[F(1), F(1, 2)], [F(1, 2), F(1, 2)]])


def test_enumerate_points_examples():
    assert enumerate_points(SQUARE, 1) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(enumerate_points(SQUARE, 2)) == 9
    assert enumerate_points(HALF, 3) == [(0,), (F(1, 3),)]


def test_enumeration_is_lexicographic_and_unique():
    P = from_points([(F(-1, 2), 0), (2, F(1, 3)), (F(1, 4), F(5, 2))])
    pts = enumerate_points(P, 5)
    assert pts == sorted(set(pts))
    assert all(contains(P, p) for p in pts)


def test_count_examples():
    assert count(simplex(2), 1) == 3
    assert count(simplex(2), 2) == 6
    point = from_points([[F(1, 2)]])
    assert count(point, 1) == 0
    assert count(point, 2) == 1


def test_count_rejects_bad_m():
    with pytest.raises(ValueError):
        count(SQUARE, 0)


def test_count_large_dilation_uses_exact_integers():
    # coordinates far beyond int64 after scaling
    big = 10**15
    P = from_points([[0], [big]])
    assert count(P, 10**6) == big * 10**6 + 1
    assert count(from_points([(F(1, 3), 0), (F(1, 3), big)]), 3 * 10**6) == 3 * big * 10**6 + 1


def test_count_many_is_ordered_with_workers():
    P = from_points([(0, 0), (F(3, 2), 0), (0, F(2, 3))])
    ms = list(range(1, 15))
    assert count_many(P, ms, workers=3) == [count(P, m) for m in ms]


def test_ehrhart_fit_examples():
    assert ehrhart_fit(SEGMENT) == QuasiPolynomial.from_polynomial([1, 1])
    q = ehrhart_fit(HALF)
    assert q.period == 2 and q == PERIOD2
    assert [q(m) for m in range(1, 6)] == [1, 2, 2, 3, 3]
    assert ehrhart_fit(SQUARE) == QuasiPolynomial.from_polynomial([1, 2, 1])


def test_ehrhart_fit_lower_dimensional():
    seg = from_points([(0, 0), (2, 1)])
    q = ehrhart_fit(seg)
    assert q.degree == 1
    assert all(q(m) == count(seg, m) for m in range(1, 20))


def test_ehrhart_period_hint_too_small_is_caught():
    with pytest.raises(FitValidationError):
        ehrhart_fit(HALF, period_hint=1)


def test_period_hint_multiple_still_canonical():
    assert ehrhart_fit(HALF, period_hint=6) == PERIOD2


def test_report_fields():
    rep = ehrhart_report(SQUARE)
    assert rep.fitted == QuasiPolynomial.from_polynomial([1, 2, 1])
    assert all(rep.fitted(m) == c for m, c in rep.counts.items() if m <= rep.validated_up_to)


def test_quasipoly_eval_examples():
    assert quasipoly_eval(QuasiPolynomial.zero(), 7) == 0
    assert quasipoly_eval(QuasiPolynomial.from_polynomial([1, 2, 1]), 3) == 16
    assert quasipoly_eval(PERIOD2, 5) == 3


def test_quasipoly_sub_examples():
    assert quasipoly_sub(PERIOD2, PERIOD2).is_zero()
    d = quasipoly_sub(QuasiPolynomial.from_polynomial([1, 1]), QuasiPolynomial.from_polynomial([0, 1]))
    assert d == QuasiPolynomial.from_polynomial([1]) and d.period == 1
    d = quasipoly_sub(PERIOD2, QuasiPolynomial.from_polynomial([0, F(1, 2)]))
    assert d.period == 2 and d.coefficients == ((F(1), F(1, 2)),)


def test_quasipoly_is_zero_examples():
    assert quasipoly_is_zero(QuasiPolynomial.zero())
    assert not quasipoly_is_zero(QuasiPolynomial.from_polynomial([1]))
    assert quasipoly_is_zero(quasipoly_sub(ehrhart_fit(SEGMENT), QuasiPolynomial.from_polynomial([1, 1])))


def test_canonical_form_minimizes_period():
    q = QuasiPolynomial([[F(2)] * 6, [F(1), F(3)] * 3])
    assert q.period == 2
    assert q == QuasiPolynomial([[F(2), F(2)], [F(1), F(3)]])


def test_serialization_round_trip():
    assert QuasiPolynomial.from_dict(PERIOD2.to_dict()) == PERIOD2
    assert PERIOD2.to_dict() == {"degree": 1, "period": 2, "coefficients": [["1", "1/2"], ["1/2", "1/2"]]}


def test_rendering():
    assert render_quasi_polynomial(QuasiPolynomial.from_polynomial([1, 2, 1])) == "L(m) = m^2 + 2m + 1"
    assert render_quasi_polynomial(QuasiPolynomial.from_polynomial([1, 1])) == "L(m) = m + 1"
    text = render_quasi_polynomial(PERIOD2)
    assert "m = 0 mod 2" in text and "m = 1 mod 2" in text


def test_fit_quasi_polynomial_on_known_function():
    def f(m):
        return (m * m + (m % 3)) * 2

    q = fit_quasi_polynomial(f, 2, 3).fitted
    assert all(q(m) == f(m) for m in range(1, 50))
    assert q.period == 3


# ---- oracle properties


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_count_matches_box_scan(seed):
    rng = random.Random(seed)
    pts = random_points(rng, rng.randint(1, 3))
    P = from_points(pts)
    H = BruteHull(pts)
    for m in (1, 2, 3, rng.randint(4, 8)):
        assert count(P, m) == box_scan(pts, m, H.contains)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_polytope_inclusion_exclusion(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    pa, pb = random_points(rng, n), random_points(rng, n)
    P, Q = from_points(pa), from_points(pb)
    R = intersect(P, Q)
    Ha, Hb = BruteHull(pa), BruteHull(pb)
    for m in (1, 2, 3):
        union = box_scan(pa + pb, m, lambda x: Ha.contains(x) or Hb.contains(x))
        inter = count(R, m) if R is not None else 0
        assert count(P, m) + count(Q, m) - inter == union


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**9))
def test_fit_extrapolates_and_leading_coefficient_is_volume(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    P = from_points(random_points(rng, n, max_den=3))
    rep = ehrhart_report(P)
    q = rep.fitted
    for m in rng.sample(range(rep.validated_up_to + 1, rep.validated_up_to + 60), 5):
        assert q(m) == count(P, m)
    vol = volume(P)
    assert all(q.coefficient(n, r) == vol for r in range(q.period))
