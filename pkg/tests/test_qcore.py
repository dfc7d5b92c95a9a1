from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import frozen
import oracles
from qforge.qcore import (
    ONE,
    Q,
    Factor,
    NonUnitLeadingCoefficient,
    ProductSpec,
    QMonomial,
    QSeries,
    UnrepresentableDenominator,
    den_for,
    dilate,
    finite_product,
    poch_inf,
    pochhammer,
    pochhammer_inf,
    q_binomial,
)

ORDER = 20


@st.composite
def series(draw, den=None, unit=False):
    den = den or draw(st.sampled_from([1, 2, 4]))
    coeffs = draw(st.lists(st.integers(-5, 5), min_size=1, max_size=12))
    if unit:
        coeffs[0] = draw(st.sampled_from([1, -1]))
    lo = 0 if unit else draw(st.integers(-3, 3))
    order = draw(st.integers(8, 25))
    terms = {Fraction(lo + i, den): c for i, c in enumerate(coeffs) if c}
    return QSeries.from_terms(terms, order)


def same(a, b):
    return a.compare(b) is None


@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert same(a + b, b + a)
    assert same(a * b, b * a)
    assert same((a + b) + c, a + (b + c))
    assert same((a * b) * c, a * (b * c))
    assert same(a * (b + c), a * b + a * c)
    assert same(a - a, QSeries.zero(a.order_q))


@given(series(unit=True))
def test_invert_two_sided(u):
    one = QSeries.one(u.order_q)
    assert same(u * u.invert(), one)
    assert same(u.invert() * u, one)


@given(series(unit=True), st.integers(-4, 4))
def test_invert_off_zero_valuation(u, k):
    s = u.shift(k)
    inv = s.invert()
    assert inv.valuation == -k
    assert same(s * inv, QSeries.one(min(s.order_q + inv.valuation, inv.order_q + k)))


@given(series(), series(), st.sampled_from([2, 3]))
def test_dilate_is_homomorphism(a, b, k):
    assert same(dilate(a * b, k), dilate(a, k) * dilate(b, k))
    assert same(dilate(a + b, k), dilate(a, k) + dilate(b, k))


@given(st.integers(0, 6), st.integers(0, 6), st.sampled_from([1, 2]), st.sampled_from([1, -1]))
def test_pochhammer_splits(n, m, e, sign):
    a, base = QMonomial.q(Fraction(e, 2), sign), Q
    lhs = pochhammer(a, base, n, ORDER) * pochhammer(a * base ** n, base, m, ORDER)
    assert same(lhs, pochhammer(a, base, n + m, ORDER))


@given(series(), st.integers(1, 30))
def test_json_round_trip(s, _):
    assert same(QSeries.from_json(s.to_json()), s)
    assert QSeries.from_json(s.to_json()).order_q == s.order_q


def test_partition_counts():
    s = pochhammer_inf(ProductSpec((poch_inf(1, 1, -1),)), 60)
    assert s.dense() == frozen.PARTITIONS_60


def test_distinct_partition_counts():
    s = pochhammer_inf(ProductSpec((poch_inf(1, 1, 1, a_sign=-1),)), 60)
    assert s.dense() == frozen.DISTINCT_60


def test_pentagonal_numbers():
    s = pochhammer_inf(ProductSpec((poch_inf(1, 1),)), 40)
    expect = [0] * 41
    for k in range(-6, 7):
        e = k * (3 * k - 1) // 2
        if e <= 40:
            expect[e] += (-1) ** (k % 2)
    assert s.dense() == expect


def test_empty_product_is_one():
    assert same(pochhammer_inf(ProductSpec(), 10), QSeries.one(10))


def test_truncation_takes_minimum():
    a = QSeries.from_terms({0: 1, 1: 1}, 10)
    b = QSeries.from_terms({0: 1}, 4)
    assert (a + b).order_q == 4
    # q^2 times something known through q^4 is known through q^6, capped by a's order
    assert (a * b.shift(2)).order_q == 6


def test_compare_reports_first_difference():
    a = QSeries.from_terms({0: 1, 3: 2}, 10)
    b = QSeries.from_terms({0: 1, 3: 1}, 10)
    assert a.compare(b) == 3
    assert a != b
    assert a.compare(a) is None


def test_laurent_support():
    s = QSeries.from_terms({Fraction(-3, 2): 1, 0: -2}, 5)
    assert s.valuation == Fraction(-3, 2)
    assert s.coeff(Fraction(-3, 2)) == 1
    assert s.den == 2


def test_invert_needs_unit_leading():
    with pytest.raises(NonUnitLeadingCoefficient):
        QSeries.from_terms({0: 2, 1: 1}, 5).invert()
    # leading unit away from q^0 is fine
    s = QSeries.from_terms({2: -1, 3: 1}, 10)
    assert same(s * s.invert(), QSeries.one(s.order_q + s.invert().valuation))


def test_denominators_are_restricted():
    assert den_for(Fraction(1, 2), Fraction(3, 4)) == 4
    with pytest.raises(UnrepresentableDenominator):
        den_for(Fraction(1, 3))


def test_apply_divides_by_factors():
    # (1 - q) applied with power -1 is 1/(1 - q)
    s = QSeries.one(10).apply([Factor(1, Fraction(1), -1)])
    assert s.dense() == [1] * 11


def test_monomial_algebra():
    x = QMonomial.q(Fraction(1, 2), -1)
    assert (x * x).exponent == 1 and (x * x).sign == 1
    assert (x / x) == ONE
    assert x.inverse().exponent == Fraction(-1, 2)
    assert (-x).sign == 1


@settings(max_examples=40)
@given(st.integers(0, 9), st.integers(-1, 10), st.sampled_from([1, 2]))
def test_q_binomial_matches_pascal(n, k, step):
    got = q_binomial(n, k, QMonomial.q(step), 30)
    assert got.dense() == oracles.qbinom(n, k, 30, step)


def test_finite_product_order():
    s = finite_product([Factor(1, Fraction(1), 1), Factor(1, Fraction(2), 1)], 10)
    assert s.dense() == [1, -1, -1, 1] + [0] * 7


def test_dilate_spaces_coefficients():
    s = QSeries.from_terms({0: 1, 1: 2}, 3)
    d = dilate(s, 2)
    assert d.dense() == [1, 0, 2, 0, 0, 0, 0, 0]
    assert d.order_q == 7
