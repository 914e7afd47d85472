import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from taylorstab.exactnum import DomainError, DyadicInterval
from taylorstab.taylorpoly import (
    ComplexPoint,
    IntPoly,
    e_polynomial,
    e_polynomial_bruteforce,
    f_m_polynomial,
    line_poly,
    membership_poly,
    partial_sum,
    poly_json,
    ray_poly,
    ray_restrict,
    scaled_partial_sum,
    t_n_eval,
    tn_ode_residual,
)

z, x, y = sympy.symbols("z x y")

small_q = st.fractions(min_value=-3, max_value=3, max_denominator=64)


def _sym_partial(n):
    return sum(z**k / sympy.factorial(k) for k in range(n + 1))


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_partial_sum_matches_sympy(n):
    ref = sympy.Poly(_sym_partial(n), z).all_coeffs()[::-1]
    assert partial_sum(n).fractions() == [Fraction(int(c.p), int(c.q)) for c in ref]


@pytest.mark.parametrize("n", [1, 3, 7])
def test_scaled_partial_sum(n):
    p = scaled_partial_sum(n)
    for k, c in enumerate(p.fractions()):
        assert c == Fraction(n**k, math.factorial(k))


def test_invalid_n():
    with pytest.raises(ValueError):
        partial_sum(0)
    with pytest.raises(ValueError):
        f_m_polynomial(0)


@pytest.mark.parametrize("n", range(1, 25))
def test_e_polynomial_closed_form_matches_expansion(n):
    assert e_polynomial(n) == e_polynomial_bruteforce(n)


@pytest.mark.parametrize("n", range(1, 13))
def test_e_polynomial_lowest_term(n):
    frac = e_polynomial(n).fractions()
    k = next(i for i, c in enumerate(frac) if c)
    assert k == n + 1 + (1 if n % 2 == 0 else 0)


@pytest.mark.parametrize("n", [1, 2, 4, 8, 15])
def test_membership_poly_matches_sympy(n):
    xr, yr = sympy.symbols("xr yr", real=True)
    s = sympy.expand(_sym_partial(n).subs(z, xr + sympy.I * yr))
    re, im = s.as_real_imag()
    gx = sympy.Poly(sympy.expand(re**2 + im**2 - 1), xr, yr)
    ours = membership_poly(n)
    ref = {m: Fraction(int(c.p), int(c.q)) for m, c in zip(gx.monoms(), gx.coeffs())}
    assert ours.coeffs == ref
    assert ours.only_even_y()
    assert ours.total_degree == 2 * n


@pytest.mark.parametrize("n", [3, 6])
def test_membership_restriction_is_e_polynomial(n):
    assert membership_poly(n).restrict_x0() == e_polynomial(n)


@given(st.integers(1, 10), small_q, small_q, small_q, small_q)
def test_line_poly_agrees_with_bivariate(n, a, b, c, d):
    g = membership_poly(n)
    lp = line_poly(n, (a, b), (c, d))
    for t in (Fraction(0), Fraction(1, 3), Fraction(-2)):
        assert lp(t) == g(a + t * c, b + t * d)


@given(st.integers(1, 8), st.one_of(st.none(), small_q))
def test_ray_poly_agrees_with_restriction(n, t):
    assert ray_poly(n, t, scaled=False) == ray_restrict(membership_poly(n), t)
    assert ray_poly(n, t, scaled=True) == ray_restrict(membership_poly(n, scaled=True), t)


@pytest.mark.parametrize("n", range(1, 16))
def test_tn_ode_identity(n):
    assert tn_ode_residual(n).is_zero()


@pytest.mark.parametrize("n", [1, 4, 10])
def test_t_n_eval_encloses_mpmath(n):
    pt = ComplexPoint.exact(Fraction(-3, 5), Fraction(7, 10), 128)
    val = t_n_eval(n, pt)
    mpmath.mp.dps = 50
    zz = mpmath.mpc("-0.6", "0.7")
    ref = mpmath.factorial(n) / (n * zz) ** n * sum((n * zz) ** k / mpmath.factorial(k) for k in range(n + 1))
    assert val.re.contains(Fraction(mpmath.nstr(ref.real, 45)))
    assert val.im.contains(Fraction(mpmath.nstr(ref.imag, 45)))


def test_t_n_at_zero_raises():
    with pytest.raises(DomainError):
        t_n_eval(3, ComplexPoint.exact(0, 0))


def test_t_1_vanishes_at_minus_one():
    assert t_n_eval(1, ComplexPoint.exact(-1, 0)).abs().hi == 0


def test_f_m_coefficients():
    frac = f_m_polynomial(1).fractions()
    # -(5/2) (z/3 - z^3/(6*4))
    assert frac == [0, Fraction(-5, 6), 0, Fraction(5, 48)]


def test_f_m_close_to_minus_sine():
    mpmath.mp.dps = 30
    p = f_m_polynomial(10)
    zz = DyadicInterval(Fraction(1, 2), prec=128)
    v = float(p.eval_interval(zz).mid)
    assert abs(v + math.sin(0.5)) < 0.02


def test_sign_at_exact():
    p = IntPoly((-2, 0, 1))
    assert p.sign_at(Fraction(3, 2)) == 1
    assert p.sign_at(Fraction(7, 5)) == -1
    assert IntPoly((2,), Fraction(-1)).sign_at(0) == -1


def test_intpoly_arithmetic_and_json_roundtrip():
    p = IntPoly.from_fractions([Fraction(1, 2), Fraction(-3, 4), 2])
    q = IntPoly((1, 1))
    assert (p * q)(Fraction(5, 7)) == p(Fraction(5, 7)) * q(Fraction(5, 7))
    assert (p - p).is_zero()
    assert IntPoly.from_json(p.to_json(2, "test")) == p
    assert '"family": "E"' in poly_json(e_polynomial(4), 4, "E")
