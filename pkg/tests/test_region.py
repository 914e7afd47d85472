import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from taylorstab.exactnum import DyadicInterval, interval
from taylorstab.region import (
    OriginClass,
    Status,
    ZERO_ONLY,
    angle_to_t,
    boundary_trace,
    complex_zeros,
    contains,
    max_v_plus,
    origin_component_class,
    radial_slice_max,
    run_lengths,
    snap_dyadic,
    t_to_angle,
    v_plus,
)
from taylorstab.taylorpoly import ComplexPoint, IntPoly, e_polynomial, partial_sum


def _float_g(n, z, m=1):
    s = sum((m * z) ** k / math.factorial(k) for k in range(n + 1))
    return abs(s) ** 2 - 1


@given(
    st.integers(1, 12),
    st.fractions(min_value=-3, max_value=1, max_denominator=50),
    st.fractions(min_value=-3, max_value=3, max_denominator=50),
)
def test_contains_agrees_with_float_away_from_boundary(n, x, y):
    g = _float_g(n, complex(x, y))
    st_ = contains(n, (x, y)).status
    if g < -1e-6:
        assert st_ is Status.INSIDE
    elif g > 1e-6:
        assert st_ is Status.OUTSIDE


def test_contains_exact_boundary_points():
    assert contains(1, (-2, 0)).status is Status.BOUNDARY
    assert contains(1, 0).status is Status.BOUNDARY
    assert contains(1, -1).status is Status.INSIDE
    assert contains(1, (Fraction(-1), Fraction(1))).status is Status.BOUNDARY


def test_contains_interval_input_and_scaling():
    z = ComplexPoint(interval(Fraction(-1, 2), Fraction(-1, 2) + Fraction(1, 2**80)), interval(0))
    assert contains(2, z).status is Status.INSIDE
    # scaled region: z in S_n iff n z in U_n
    assert contains(4, (Fraction(-1, 2), 0), scaled=True) == contains(4, (-2, 0))


def test_contains_interval_straddling_boundary():
    z = ComplexPoint(interval(Fraction(-2) - Fraction(1, 2**300), Fraction(-2) + Fraction(1, 2**300), prec=400), interval(0))
    m = contains(1, z, resolution=2.0**-100)
    assert m.status is Status.BOUNDARY


def test_v_plus_small_n_oracle():
    # oracle: sympy real roots of |s_n(iy)|^2 - 1 on y >= 0
    y = sympy.Symbol("y", real=True)
    for n, expected in [(3, math.sqrt(3)), (4, math.sqrt(8))]:
        dec = v_plus(n)
        assert float(dec[-1].hi.mid) == pytest.approx(expected, abs=1e-9) or dec[-1].hi.lo <= expected <= dec[-1].hi.hi
        s = sum((sympy.I * y) ** k / sympy.factorial(k) for k in range(n + 1))
        re, im = sympy.expand(s).as_real_imag()
        roots = [r for r in sympy.Poly(sympy.expand(re**2 + im**2 - 1), y).real_roots() if r >= 0]
        assert max(float(r) for r in roots) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("n", range(1, 41))
def test_origin_class_mod4(n):
    want = OriginClass.POSITIVE_INTERVAL if n % 4 in (0, 3) else OriginClass.SINGLETON
    assert origin_component_class(n) is want
    first = v_plus(n)[0]
    assert (first.lo.lo == 0 and not first.degenerate) == (want is OriginClass.POSITIVE_INTERVAL)


def test_max_v_plus_y81():
    mpmath.mp.dps = 40
    coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(e_polynomial(8).fractions())]
    ref = mpmath.findroot(lambda t: mpmath.polyval(coeffs, t), mpmath.mpf("3.395"))
    box = max_v_plus(8, Fraction(1, 10**14))
    q = Fraction(mpmath.nstr(ref, 30))
    assert box.lo - Fraction(1, 10**25) <= q <= box.hi + Fraction(1, 10**25)
    assert mpmath.nstr(ref, 30).startswith("3.3951402205749")


def test_slices_are_ordered_and_disjoint():
    dec = v_plus(40).refined(Fraction(1, 10**6))
    for a, b in zip(dec, dec.intervals[1:]):
        assert a.hi.hi < b.lo.lo
    rows = dec.rows(6)
    assert rows[0][:2] == (40, 1)


def test_run_lengths():
    assert run_lengths([1, 2, 2, 1, 3, 0]) == [3, 2, 1]
    assert run_lengths([]) == []


def test_radial_slice_n1_negative_axis():
    rs = radial_slice_max(1, None, Fraction(1, 10**9))
    assert rs.global_max.lo <= 2 <= rs.global_max.hi
    assert rs.origin_max.lo <= 2 <= rs.origin_max.hi


def test_radial_slice_positive_axis_is_zero_only():
    rs = radial_slice_max(1, Fraction(0))
    assert rs.global_max is ZERO_ONLY and rs.origin_max is ZERO_ONLY


def test_angle_roundtrip():
    for phi in (0.3, 1.2, 2.9):
        t = angle_to_t(phi, 1e-10)
        assert abs(t_to_angle(t) - phi) < 1e-10
    assert angle_to_t(math.pi) is None


def test_snap_dyadic():
    q = snap_dyadic(0.1)
    assert q.denominator == 2**40 or (q.denominator & (q.denominator - 1)) == 0


@pytest.mark.parametrize("n", [5, 12])
def test_complex_zeros_match_mpmath(n):
    zs = [complex(float(z.re.mid), float(z.im.mid)) for z in complex_zeros(partial_sum(n))]
    ref = [complex(r) for r in mpmath.polyroots([1 / mpmath.factorial(k) for k in range(n, -1, -1)], maxsteps=200, extraprec=200)]
    assert len(zs) == len(ref) == n
    for b in ref:
        assert min(abs(a - b) for a in zs) < 1e-8 * max(1, abs(b))


def test_boundary_trace_n1():
    # |1 + x + i y|^2 = 1 at the smallest |x|: x = -1 + sqrt(1 - y^2)
    tr = boundary_trace(1, [Fraction(1, 2)])
    s = tr.samples[0]
    expect = -1 + math.sqrt(0.75)
    assert s.sign == -1
    assert float(s.log10_abs.mid) == pytest.approx(math.log10(-expect), rel=1e-6)
    assert boundary_trace(1, [0]).samples[0].exact_zero


def test_boundary_trace_none_when_no_root():
    tr = boundary_trace(1, [Fraction(2)])
    assert tr.samples[0].none


def test_invalid_inputs():
    with pytest.raises(ValueError):
        v_plus(0)
    with pytest.raises(ValueError):
        boundary_trace(3, [-1])
    with pytest.raises(ValueError):
        radial_slice_max(2, Fraction(-1))


def test_complex_zeros_of_z2_plus_1():
    zs = sorted((float(z.re.mid), float(z.im.mid)) for z in complex_zeros(IntPoly((1, 0, 1))))
    assert zs == pytest.approx([(0.0, -1.0), (0.0, 1.0)], abs=1e-12)


def test_radial_slice_n6_imaginary_axis_is_zero_only():
    assert radial_slice_max(6, Fraction(1)).global_max is ZERO_ONLY


def test_radial_slice_n4_negative_axis():
    rs = radial_slice_max(4, None, Fraction(1, 10**9))
    assert rs.global_max.hi <= Fraction(741, 1000)


def test_f40_real_zeros_agree_with_isolation():
    from taylorstab.rootiso import isolate_real_roots, refine_root
    from taylorstab.taylorpoly import f_m_polynomial

    p = f_m_polynomial(10)
    exact = [float(refine_root(b, p, Fraction(1, 10**12)).mid) for b in isolate_real_roots(p)]
    floats = sorted(float(z.re.mid) for z in complex_zeros(p) if abs(float(z.im.mid)) < 1e-9)
    assert len(exact) == len(floats)
    assert floats == pytest.approx(exact, abs=1e-7)
    assert any(abs(x - math.pi) < 0.1 for x in exact)
