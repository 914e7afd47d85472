import math
from fractions import Fraction

import mpmath
import pytest

from taylorstab.exactnum import Indeterminate
from taylorstab.extremal import (
    BudgetExhausted,
    Mode,
    NotApplicable,
    RadiusCertificate,
    cor42_radius,
    coverage_disk_check,
    inner_semidisk_radius,
    max_modulus,
    prove_empty,
)
from taylorstab.region import contains, Status

TOL = Fraction(1, 10**6)


def test_n1_full_and_left_equal_two():
    for half in (False, True):
        c = max_modulus(1, half_plane_only=half, tol=TOL)
        assert c.lo <= 2 <= c.hi
        assert c.hi - c.lo <= TOL


def test_n2_closed_form():
    # oracle: max |z| on |1 + 2z + 2z^2| = 1, derived in closed form
    ref = mpmath.sqrt(2 * (1 + mpmath.sqrt(2))) / 2
    c = max_modulus(2, tol=TOL)
    assert c.lo <= Fraction(mpmath.nstr(ref, 30)) <= c.hi
    assert c.mode is Mode.FULL


def test_witness_is_feasible_and_attains_lo():
    c = max_modulus(3, tol=TOL)
    assert contains(3, (c.witness_re, c.witness_im), scaled=True).status is not Status.OUTSIDE
    assert c.witness_re ** 2 + c.witness_im ** 2 == c.lo ** 2 or abs(
        math.hypot(float(c.witness_re), float(c.witness_im)) - float(c.lo)) < 1e-12


def test_inner_semidisk_n3_is_sqrt3_over_3():
    c = inner_semidisk_radius(3, tol=Fraction(1, 10**9))
    assert c.lo <= Fraction(mpmath.nstr(mpmath.sqrt(3) / 3, 30)) <= c.hi
    assert c.mode is Mode.INNER_SEMIDISK


def test_inner_semidisk_not_applicable_for_singleton_origin():
    out = inner_semidisk_radius(5)
    assert isinstance(out, NotApplicable)


def test_display_rounding():
    c = RadiusCertificate(1, Mode.FULL, Fraction("0.65217"), Fraction("0.65218"), Fraction(0), Fraction(0), TOL, 0)
    assert c.display(4, "up") == (Fraction("0.6522"), True)
    assert c.display(3, "down") == (Fraction("0.652"), True)
    c2 = RadiusCertificate(1, Mode.FULL, Fraction("0.65199"), Fraction("0.65201"), Fraction(0), Fraction(0), TOL, 0)
    assert c2.display(3, "up")[1] is False


def test_certificate_json_roundtrip():
    c = max_modulus(1, tol=TOL)
    assert RadiusCertificate.from_json(c.to_json()) == c


def test_coverage_disk():
    assert coverage_disk_check(6, Fraction(2), half_plane_only=False)
    assert not coverage_disk_check(6, Fraction(1, 2), half_plane_only=False)
    assert coverage_disk_check(8)
    with pytest.raises(ValueError):
        coverage_disk_check(8, "nope")


def test_cor42_radius_value():
    r = cor42_radius(16)
    ref = 1 / math.e + 2.1 * math.sqrt(math.e**2 + 1) / 4
    assert abs(float(r.mid) - ref) < 1e-12


def test_budget_exhaustion_surfaces_as_indeterminate():
    with pytest.raises(Indeterminate):
        coverage_disk_check(12, Fraction(1, 2), half_plane_only=False, budget=10)
    with pytest.raises(BudgetExhausted):
        max_modulus(6, tol=TOL, budget=10)


def test_prove_empty_backends_agree():
    a = prove_empty(5, "outer", Fraction(3, 4), True, backend="numpy")
    b = prove_empty(5, "outer", Fraction(3, 4), True)
    assert (a.empty, a.boxes) == (b.empty, b.boxes)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        max_modulus(0)
    with pytest.raises(ValueError):
        max_modulus(2, tol=Fraction(0))
    with pytest.raises(ValueError):
        prove_empty(2, "sideways", Fraction(1))
