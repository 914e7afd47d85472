import math
from fractions import Fraction

import mpmath
import pytest

from taylorstab.exactnum import DomainError, interval, lambert_w
from taylorstab.region import Status
from taylorstab.szego import (
    Variant,
    buckholtz_bounds_check,
    contour_points,
    convexity_probe,
    delta_rho,
    distance_lower_bound,
    left_arc_directions,
    left_arc_points,
    moebius_inf_sup,
    moebius_sup_formula,
    rational_circle_points,
    sigma1_boundary_x_range,
    sigma1_contains,
    sigma1_upper_boundary,
    step1_distance,
    step2_distance,
    sup_band_split,
)

mpmath.mp.dps = 40
E = mpmath.e


def _q(v):
    return Fraction(mpmath.nstr(v, 35))


def _near(iv, v, tol=Fraction(1, 10**30)):
    q = _q(v)
    return iv.lo - tol <= q <= iv.hi + tol


def test_membership_simple_points():
    assert sigma1_contains(Fraction(1, 4)).status is Status.INSIDE
    assert sigma1_contains(Fraction(-1, 2)).status is Status.OUTSIDE
    assert sigma1_contains(Fraction(1)).status is Status.BOUNDARY
    assert sigma1_contains((Fraction(1, 2), Fraction(9, 10))).status is Status.OUTSIDE


def test_membership_on_curve_refinable_point():
    # i/e lies on the curve: |i/e| e^{1} / e = 1
    def ie(prec):
        return interval(0, prec=prec), interval(-1, prec=prec).exp()

    assert sigma1_contains(ie, resolution=2.0**-120).status is Status.BOUNDARY


def test_boundary_x_range():
    lo, hi = sigma1_boundary_x_range(128)
    assert hi == 1
    assert _near(lo, -mpmath.lambertw(1 / E).real)


def test_upper_boundary_values():
    v = sigma1_upper_boundary(Fraction(0), 128)
    assert _near(v, mpmath.exp(-1))
    assert sigma1_upper_boundary(Fraction(1), 128).contains(0)


def test_delta_at_split_is_half():
    split = sup_band_split(256)
    assert delta_rho(split, 256).contains(Fraction(1, 2))


def test_delta_at_two_over_e():
    # derived: rho = 2/e gives (2 - 1)/sqrt(e^2 + 1)
    v = distance_lower_bound(interval(2, prec=128) / interval(1, prec=128).exp(), 128)
    ref = 1 / mpmath.sqrt(E**2 + 1)
    assert _near(v, ref)
    assert round(float(ref), 6) == 0.345258


def test_distance_lower_bound_domain():
    with pytest.raises(DomainError):
        distance_lower_bound(Fraction(1, 3))


def test_step_distances_agree():
    for phi in (Fraction(17, 10), Fraction(2), Fraction(3)):
        w = lambert_w(-interval(phi, prec=128).cos() / interval(1, prec=128).exp(), 128).value
        a = step1_distance(Fraction(1), phi, 128)
        b = step2_distance(Fraction(1), w, 128)
        assert abs(a.mid - b.mid) < Fraction(1, 10**20)


def test_step1_domain():
    with pytest.raises(DomainError):
        step1_distance(Fraction(1), Fraction(1))


def test_step2_limit_identity():
    # w = 0 (the ray along the imaginary axis) reduces to the plain lower bound
    a = step2_distance(Fraction(1), Fraction(0), 128)
    b = distance_lower_bound(Fraction(1), 128)
    assert abs(a.mid - b.mid) < Fraction(1, 10**30)


def test_moebius_sup_formula_matches_geometry():
    for rho in (Fraction(3, 2), Fraction(2)):
        d = (rho * E - 1) / (2 * mpmath.sqrt(E**2 + 1))
        y2 = d**2 - (d - 1) ** 2
        ref = mpmath.sqrt(d**2 + y2) / d
        got = moebius_sup_formula(rho, 128)
        assert _near(got, ref)
    assert round(float(moebius_sup_formula(Fraction(2)).mid), 5) == 1.38078


def test_moebius_inf_exact():
    assert moebius_inf_sup(Fraction(1)) == Fraction(1, 2)
    assert moebius_inf_sup(Fraction(1, 4)) == Fraction(1, 5)
    with pytest.raises(DomainError):
        moebius_inf_sup(Fraction(0))


@pytest.mark.parametrize("rho,bound", [(Fraction(95, 100), 1), (Fraction(14, 10), 1), (Fraction(3, 2), Fraction(139, 100)), (Fraction(2), Fraction(139, 100))])
def test_moebius_sup_bands(rho, bound):
    v = moebius_inf_sup(None, Variant.SUP_BAND, rho=rho)
    assert v.contains(bound)


def test_moebius_sup_band_outside_domain():
    with pytest.raises(DomainError):
        moebius_inf_sup(None, "SupBand", rho=Fraction(1, 2))
    with pytest.raises(DomainError):
        moebius_inf_sup(None, "SupBand", rho=Fraction(3))


@pytest.mark.parametrize("region", ["unit", "outside"])
def test_buckholtz_small(region):
    rep = buckholtz_bounds_check(6, samples=60, region=region)
    assert rep.ok
    assert rep.max_ratio <= 1.0


def test_convexity_probe():
    ok, count = convexity_probe(Fraction(1, 100))
    assert ok and count > 50


def test_contour_points_shape():
    pts = contour_points((0.5, 1.0), 36)
    assert {lvl for _, _, lvl in pts} == {0.5, 1.0}
    on_curve = [(x, y) for x, y, lvl in pts if lvl == 1.0]
    assert on_curve
    for x, y in on_curve:
        z = complex(x, y)
        assert abs(abs(z * math.e ** (1 - z)) - 1) < 1e-6


def test_rational_points_lie_on_circles():
    for x, y in rational_circle_points(Fraction(1, 4), 50):
        assert x * x + y * y == Fraction(1, 16)
    dirs = left_arc_directions(21)
    assert (Fraction(0), Fraction(1)) in dirs and (Fraction(0), Fraction(-1)) in dirs
    assert all(c <= 0 and c * c + s * s == 1 for c, s in dirs)
    for x, y in left_arc_points(Fraction(1, 3), 11):
        assert x <= 0 and x * x + y * y == Fraction(1, 9)
