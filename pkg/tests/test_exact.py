from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dioph_lab.exact import (
    Power,
    QuadraticNumber,
    dist_to_Z,
    frac_dist,
    parse_exact,
    sqrt_sum_less,
    to_json_value,
)
from dioph_lab.intervals import PrecisionExhausted, certify_lt, to_iv

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=40)
positive = st.fractions(min_value=Fraction(1, 40), max_value=50, max_denominator=40)


def test_dist_to_Z_examples():
    assert frac_dist(Fraction(2, 5)) == Fraction(2, 5)
    assert dist_to_Z([Fraction(7, 10), Fraction(1, 5)]) == Fraction(3, 10)
    # euclidean distances are reported squared
    assert dist_to_Z([Fraction(1, 2), Fraction(1, 2)], "euclidean") == Fraction(1, 2)


@given(fractions)
def test_frac_dist_range_and_periodicity(x):
    d = frac_dist(x)
    assert 0 <= d <= Fraction(1, 2)
    assert frac_dist(x + 3) == d
    assert frac_dist(-x) == d


def test_quadratic_field_arithmetic():
    r2 = QuadraticNumber.sqrt(2)
    assert r2 * r2 == 2
    g = QuadraticNumber(Fraction(-1, 2), Fraction(1, 2), 5)  # golden ratio conjugate
    assert g * g + g == 1
    assert (1 / (r2 - 1)) == r2 + 1
    assert QuadraticNumber(0, 1, 8) == 2 * r2  # sqrt(8) normalizes to 2 sqrt(2)


@given(fractions, fractions)
def test_quadratic_order_matches_float(a, b):
    x = QuadraticNumber(a, b, 2)
    y = QuadraticNumber(b, a, 2)
    if abs(float(x) - float(y)) > 1e-9:
        assert (x < y) == (float(x) < float(y))


def test_frac_dist_of_surd():
    x = QuadraticNumber(-1, 1, 2)  # 0.414...
    assert frac_dist(x) == x
    assert frac_dist(3 * x) == 3 * x - 1  # 1.2426... -> 0.2426...


def test_power_normalizes_perfect_roots():
    assert Power.of(4, Fraction(1, 2)) == 2
    assert Power.of(Fraction(1, 27), Fraction(-1, 3)) == 3
    assert Power.of(3, Fraction(-3, 2)) * Power.of(3, Fraction(3, 2)) == 1
    assert Power.of(36, Fraction(3, 2)) == 216


def test_power_comparisons_are_exact():
    assert Power.of(2, Fraction(1, 2)) < Power.of(3, Fraction(1, 3))
    assert Power.of(2, Fraction(1, 3)) > Power.of(Fraction(5, 4), 1)


@given(positive, positive, positive)
def test_sqrt_sum_less_matches_float(a, b, c):
    lhs = float(a) ** 0.5 + float(b) ** 0.5
    rhs = float(c) ** 0.5
    if abs(lhs - rhs) > 1e-9:
        assert sqrt_sum_less(a, b, c) == (lhs < rhs)


def test_sqrt_sum_equality_case():
    # sqrt(1) + sqrt(1) = sqrt(4)
    assert not sqrt_sum_less(1, 1, 4)
    assert sqrt_sum_less(1, 1, 4, strict=False)


def test_json_round_trip():
    vals = [Fraction(3, 7), QuadraticNumber(1, -2, 3), Power.of(2, Fraction(1, 3)) * Fraction(5, 2)]
    for v in vals:
        assert parse_exact(to_json_value(v)) == v
    assert parse_exact("sqrt(2)-1") == QuadraticNumber(-1, 1, 2)
    assert parse_exact("3/4") == Fraction(3, 4)
    with pytest.raises(ValueError):
        parse_exact(0.5)


def test_interval_enclosures_contain_values():
    x = Power.of(2, Fraction(1, 2))
    enc = to_iv(x)
    assert enc.a <= 1.4142135623730951 <= enc.b
    assert certify_lt(lambda: to_iv(Power.of(2, Fraction(1, 2))), lambda: to_iv(Fraction(142, 100)))


def test_certify_lt_exhausts_on_equal_values():
    with pytest.raises(PrecisionExhausted):
        certify_lt(lambda: to_iv(Power.of(2, Fraction(1, 2))), lambda: to_iv(QuadraticNumber(0, 1, 2)), max_dps=120)
