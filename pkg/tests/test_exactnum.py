from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from taylorstab.exactnum import (
    DomainError,
    DyadicInterval,
    E,
    Indeterminate,
    const,
    decide,
    e,
    eval_to_width,
    exp,
    factorial_bounds_check,
    interval,
    interval_eval,
    inv_e,
    lambert_w,
    pi,
    sqrt,
)

mpmath.mp.dps = 60

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 1000), max_value=50, max_denominator=10**6)


def test_exp_one_encloses_e():
    v = interval(1, prec=128).exp()
    assert v.width < Fraction(1, 2**60)
    assert v.contains(Fraction(mpmath.nstr(mpmath.e, 40)))


def test_sqrt_two_squares_to_two():
    r = interval(2, prec=128).sqrt()
    assert r.contains(Fraction(mpmath.nstr(mpmath.sqrt(2), 40)))
    assert r.square().contains(2)


def test_delta_at_095_matches_reference():
    expr = (E * const(Fraction(95, 100)) - 1) / (2 * sqrt(E * E + 1))
    v = eval_to_width(expr, Fraction(1, 10**30))
    ref = (mpmath.e * mpmath.mpf("0.95") - 1) / (2 * mpmath.sqrt(mpmath.e**2 + 1))
    assert v.contains(Fraction(mpmath.nstr(ref, 45)))


def test_sqrt_of_negative_interval_is_domain_error():
    with pytest.raises(DomainError):
        interval(-2, -1).sqrt()
    with pytest.raises(DomainError):
        interval_eval(sqrt(const(-1)))


def test_overlapping_comparison_is_indeterminate():
    with pytest.raises(Indeterminate):
        interval(0, 2) < interval(1, 3)
    assert interval(0, 1) < interval(2, 3)


@given(rationals, rationals)
def test_arithmetic_contains_exact_result(a, b):
    x, y = DyadicInterval(a), DyadicInterval(b)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    if b != 0:
        assert (x / y).contains(a / b)


@given(positive)
def test_monotone_refinement(q):
    expr = exp(sqrt(const(q))) + const(q)
    lo = interval_eval(expr, 64)
    hi = interval_eval(expr, 256)
    assert hi.subset_of(lo)
    assert hi.width <= lo.width


@given(st.fractions(min_value=Fraction(-367878, 10**6), max_value=1000, max_denominator=10**6))
def test_lambert_residual(x):
    w = lambert_w(x).value
    assert (w * w.exp()).contains(x)
    assert w.lo >= -1


def test_lambert_special_values():
    assert lambert_w(0).value.lo == 0 and lambert_w(0).value.hi == 0
    w_e = lambert_w(e(128), 128).value
    assert w_e.contains(1)
    w = lambert_w(inv_e(96), 96).value
    assert w.contains(Fraction(mpmath.nstr(mpmath.lambertw(1 / mpmath.e).real, 12)) ) or (
        abs(w.mid - Fraction(mpmath.nstr(mpmath.lambertw(1 / mpmath.e).real, 40))) < Fraction(1, 10**20)
    )


def test_lambert_below_branch_point_raises():
    with pytest.raises(DomainError):
        lambert_w(Fraction(-1, 2))


@pytest.mark.parametrize("n", [1, 10, 100])
def test_factorial_bounds_examples(n):
    assert factorial_bounds_check(n)
    # oracle: 60-digit evaluation
    lower = (mpmath.mpf(n) / mpmath.e) ** n * mpmath.sqrt(2 * mpmath.pi * n)
    upper = mpmath.e * (mpmath.mpf(n) / mpmath.e) ** n * mpmath.sqrt(n)
    assert lower < mpmath.factorial(n) <= upper


def test_factorial_bounds_n1_values():
    lower = (1 / mpmath.e) * mpmath.sqrt(2 * mpmath.pi)
    assert mpmath.nstr(lower, 4) == "0.9221"


def test_factorial_bounds_all_n_up_to_200():
    assert all(factorial_bounds_check(n) for n in range(1, 201))


def test_decide_doubles_precision():
    seen = []
    target = Fraction(mpmath.nstr(mpmath.pi, 40))

    def pred(prec):
        seen.append(prec)
        return pi(prec) > target

    assert decide(pred) is True
    assert seen[0] == 64 and len(seen) > 1
    assert all(b == 2 * a for a, b in zip(seen, seen[1:]))


def test_interval_string_endpoints_round_outward():
    v = interval("0.1")
    assert v.contains(Fraction(1, 10))
    assert not v.is_point()
