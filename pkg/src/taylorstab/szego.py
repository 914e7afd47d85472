"""Geometry of the Szegő region ``{|z e^(1-z)| <= 1, |z| <= 1}`` and related bounds."""
from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactnum import (
    DEFAULT_PREC,
    DomainError,
    DyadicInterval,
    Indeterminate,
    decide,
    e as e_const,
    interval,
    lambert_w,
    max_precision,
)
from .region import Membership, Status
from .taylorpoly import ComplexPoint, t_n_eval

__all__ = [
    "SzegoQuery",
    "sigma1_contains",
    "sigma1_query",
    "sigma1_boundary_x_range",
    "sigma1_upper_boundary",
    "distance_lower_bound",
    "step1_distance",
    "step2_distance",
    "delta_rho",
    "Variant",
    "moebius_inf_sup",
    "moebius_sup_formula",
    "sup_band_split",
    "BuckholtzReport",
    "buckholtz_bounds_check",
    "convexity_probe",
    "contour_points",
    "rational_circle_points",
    "left_arc_directions",
    "left_arc_points",
]


def _iv(q, prec) -> DyadicInterval:
    return q.at_prec(prec) if isinstance(q, DyadicInterval) else DyadicInterval(q, prec=prec)


def _point(z, prec) -> tuple[DyadicInterval, DyadicInterval]:
    if callable(z):
        # lazily refinable point: prec -> (re, im)
        re, im = z(prec)
        return _iv(re, prec), _iv(im, prec)
    if isinstance(z, ComplexPoint):
        return z.re.at_prec(prec), z.im.at_prec(prec)
    if isinstance(z, tuple):
        return _iv(z[0], prec), _iv(z[1], prec)
    if isinstance(z, complex):
        return _iv(Fraction(z.real), prec), _iv(Fraction(z.imag), prec)
    return _iv(z, prec), DyadicInterval(0, prec=prec)


def _cls(v: DyadicInterval) -> Optional[int]:
    if v.hi < 0:
        return -1
    if v.lo > 0:
        return 1
    if v.lo == 0 and v.hi == 0:
        return 0
    return None


def sigma1_contains(z, prec: int = DEFAULT_PREC, resolution: float = 2.0**-200) -> Membership:
    """Certified classification of ``z`` against the Szegő region.

    Both conditions are compared in squared form: ``|z|^2 e^(2-2x) <= 1`` and
    ``|z|^2 <= 1``.
    """
    p = prec
    while True:
        x, y = _point(z, p)
        r2 = x.square() + y.square()
        f1 = r2 * (2 - 2 * x).exp() - 1
        f2 = r2 - 1
        c1, c2 = _cls(f1), _cls(f2)
        if c1 == 1 or c2 == 1:
            return Membership(Status.OUTSIDE)
        if c1 == -1 and c2 == -1:
            return Membership(Status.INSIDE)
        if c1 is not None and c2 is not None:
            return Membership(Status.BOUNDARY)
        width = float(max(f1.width, f2.width))
        if width <= resolution or p >= max_precision():
            return Membership(Status.BOUNDARY, width)
        p *= 2


@dataclass(frozen=True)
class SzegoQuery:
    point: ComplexPoint
    in_sigma1: Membership
    distance_lower_bound: Optional[DyadicInterval]


def sigma1_query(z, prec: int = DEFAULT_PREC) -> SzegoQuery:
    """Membership plus, for points outside, the circle-distance bound at ``|z|``."""
    x, y = _point(z, prec)
    m = sigma1_contains(z, prec)
    bound = None
    if m.status is Status.OUTSIDE:
        rho = (x.square() + y.square()).sqrt()
        try:
            bound = distance_lower_bound(rho, prec)
        except DomainError:
            bound = None
    return SzegoQuery(ComplexPoint(x, y), m, bound)


def sigma1_boundary_x_range(prec: int = DEFAULT_PREC) -> tuple[DyadicInterval, Fraction]:
    """``(-W(1/e), 1)``: the abscissa range of the region."""
    w = lambert_w(interval(1, prec=prec) / e_const(prec), prec)
    return -w.value, Fraction(1)


def sigma1_upper_boundary(x, prec: int = DEFAULT_PREC) -> DyadicInterval:
    """``sqrt(e^(2x-2) - x^2)``, the upper half of the boundary curve."""
    xi = _iv(x, prec)
    return ((2 * xi - 2).exp() - xi.square()).sqrt()


# ---------------------------------------------------------------------------
# distance from circles to the region
# ---------------------------------------------------------------------------


def _e_stuff(prec):
    e = e_const(prec)
    return e, (e.square() + 1).sqrt()


def distance_lower_bound(rho, prec: int = DEFAULT_PREC) -> DyadicInterval:
    """``(rho e - 1) / sqrt(e^2 + 1)`` for ``rho > 1/e``."""
    r = _iv(rho, prec)
    e, s = _e_stuff(prec)
    num = r * e - 1
    if not num.lo > 0:
        raise DomainError("rho must exceed 1/e")
    return num / s


def delta_rho(rho, prec: int = DEFAULT_PREC) -> DyadicInterval:
    """``(rho e - 1) / (2 sqrt(e^2 + 1))``."""
    r = _iv(rho, prec)
    e, s = _e_stuff(prec)
    return (r * e - 1) / (2 * s)


def step1_distance(rho, phi, prec: int = DEFAULT_PREC) -> DyadicInterval:
    """Distance from ``rho e^(i phi)`` to the tangent line at the ray's boundary point.

    Valid for ``pi/2 < phi < pi``; built from ``W(-cos(phi)/e)``.
    """
    r = _iv(rho, prec)
    ph = _iv(phi, prec)
    c = ph.cos()
    s = ph.sin()
    e = e_const(prec)
    arg = -c / e
    if not arg.lo > 0:
        raise DomainError("phi must lie in (pi/2, pi)")
    W = lambert_w(arg, prec).value
    num = abs(W + 1) * abs(W + r * c)
    den = ((W + c.square()).square() + c.square() * s.square()).sqrt()
    return num / den


def step2_distance(rho, w, prec: int = DEFAULT_PREC) -> DyadicInterval:
    """The same distance written in ``w = W(-cos(phi)/e)``."""
    r = _iv(rho, prec)
    wi = _iv(w, prec)
    ew = (wi + 1).exp()
    return (wi + 1) * (r * ew - 1) / ((2 * wi + 2).exp() * (2 * wi + 1) + 1).sqrt()


# ---------------------------------------------------------------------------
# |w/(w-1)| bounds
# ---------------------------------------------------------------------------


class Variant(enum.Enum):
    INF = "Inf"
    SUP_BAND = "SupBand"


def sup_band_split(prec: int = DEFAULT_PREC) -> DyadicInterval:
    """``(1 + sqrt(1 + e^2)) / e``, where the sup bound changes from 1 to 1.39."""
    e, s = _e_stuff(prec)
    return (1 + s) / e


def moebius_sup_formula(rho, prec: int = DEFAULT_PREC) -> DyadicInterval:
    """Value of ``|w/(w-1)|`` at ``|w-1| = Re w = delta_rho``."""
    r = _iv(rho, prec)
    e, s = _e_stuff(prec)
    inner = e.square() * (r.square() - 4) + 2 * e * (2 * s - 1) * r - 4 * s - 3
    return inner.sqrt() / (r * e - 1)


def _sample_sup(rho: Fraction, delta: float, count: int, rng: random.Random) -> float:
    """Float maximum of ``|w/(w-1)|`` over samples of ``{|w-1| >= d, Re w <= d}``."""
    best = 0.0
    for _ in range(count):
        x = delta - rng.random() * 3.0
        y = (rng.random() - 0.5) * 6.0
        if (x - 1) ** 2 + y * y < delta * delta:
            continue
        best = max(best, math.hypot(x, y) / math.hypot(x - 1, y))
    # the extremal configuration itself
    yy = math.sqrt(max(delta * delta - (delta - 1) ** 2, 0.0))
    best = max(best, math.hypot(delta, yy) / math.hypot(delta - 1, yy))
    return best


def moebius_inf_sup(
    sigma,
    variant: Union[Variant, str] = Variant.INF,
    rho=None,
    prec: int = DEFAULT_PREC,
    samples: int = 2000,
    seed: int = 0,
) -> Union[DyadicInterval, Fraction]:
    """Bounds on ``|w/(w-1)|``.

    ``Inf``: the infimum over ``|w| >= sigma`` is ``sigma/(1+sigma)``, returned
    as an exact :class:`Fraction` for rational ``sigma``.
    ``SupBand``: the certified upper bound (1 or 1.39) over the constraint set
    defined by ``rho``; sampled maximisation must stay below it.
    """
    variant = Variant(variant) if isinstance(variant, str) else variant
    if variant is Variant.INF:
        if isinstance(sigma, DyadicInterval):
            if not sigma.lo > 0:
                raise DomainError("sigma must be positive")
            return sigma / (sigma + 1)
        q = Fraction(sigma)
        if q <= 0:
            raise DomainError("sigma must be positive")
        return q / (1 + q)
    if rho is None:
        raise ValueError("SupBand needs rho")
    r = _iv(rho, prec)
    split = sup_band_split(prec)
    d = delta_rho(r, prec)
    rng = random.Random(seed)
    r_lo = r.lo if isinstance(rho, DyadicInterval) else Fraction(rho)
    if r_lo >= Fraction(95, 100) and r.hi <= split.lo:
        # delta <= 1/2 means Re w <= 1/2, where |w| <= |w - 1|
        if not d.hi <= Fraction(1, 2):
            raise Indeterminate("delta_rho not certified below 1/2")
        bound = Fraction(1)
    elif r.lo > split.hi and r.hi <= 2:
        m = moebius_sup_formula(r, prec)
        if not m.hi < Fraction(139, 100):
            raise Indeterminate("closed-form maximum not certified below 1.39")
        bound = Fraction(139, 100)
    else:
        raise DomainError("rho outside the supported bands")
    observed = _sample_sup(r.mid, float(d.mid), samples, rng)
    if observed > float(bound) + 1e-12:
        raise AssertionError(f"sampled sup {observed} exceeds {float(bound)}")
    return DyadicInterval(bound, prec=prec)


# ---------------------------------------------------------------------------
# T_n bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BuckholtzReport:
    n: int
    region: str
    samples: int
    certified: int
    failures: int
    skipped: int
    max_ratio: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.certified == self.samples


def _random_point(rng: random.Random, rmin: float, rmax: float) -> tuple[Fraction, Fraction]:
    r = rmin + (rmax - rmin) * rng.random()
    th = 2 * math.pi * rng.random()
    return Fraction(r * math.cos(th)), Fraction(r * math.sin(th))


def buckholtz_bounds_check(
    n: int,
    samples: int = 500,
    region: str = "unit",
    seed: int = 0,
    prec: int = DEFAULT_PREC,
) -> BuckholtzReport:
    """Certify ``|T_n(z)| <= c e sqrt(n)`` at random points.

    ``region='unit'`` samples ``1 <= |z| <= 3`` with ``c = 1``; ``'outside'``
    samples points certified outside the Szegő region with ``c = 2``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed * 1000003 + n)
    if region == "unit":
        factor, rmin, rmax = 1, 1.0, 3.0
    elif region == "outside":
        factor, rmin, rmax = 2, 0.05, 2.0
    else:
        raise ValueError(region)
    bound2 = (factor * e_const(prec)).square() * n
    certified = failures = skipped = 0
    max_ratio = 0.0
    taken = 0
    while taken < samples:
        x, y = _random_point(rng, rmin, rmax)
        if region == "outside":
            if sigma1_contains((x, y), prec).status is not Status.OUTSIDE:
                skipped += 1
                continue
        elif x * x + y * y < 1:
            continue
        taken += 1
        t = t_n_eval(n, ComplexPoint.exact(x, y, prec))
        a2 = t.abs2()
        max_ratio = max(max_ratio, math.sqrt(float(a2.hi) / float(bound2.lo)))
        if a2.hi <= bound2.lo:
            certified += 1
        elif a2.lo > bound2.hi:
            failures += 1
    return BuckholtzReport(n, region, samples, certified, failures, skipped, max_ratio, factor * math.e * math.sqrt(n))


# ---------------------------------------------------------------------------
# convexity and contours
# ---------------------------------------------------------------------------


def convexity_probe(step: Fraction = Fraction(1, 1000), prec: int = DEFAULT_PREC) -> tuple[bool, int]:
    """Certified nonpositive second differences of the upper boundary curve.

    Grid points lie in ``(-W(1/e) + step, 1 - step)``; returns ``(all_ok, count)``.
    """
    left, right = sigma1_boundary_x_range(prec)
    start = Fraction(math.ceil((left.hi + step) / step)) * step
    if start <= left.hi + step:
        start += step
    x = start
    count = 0
    ok = True
    while x < right - step:
        b0 = sigma1_upper_boundary(x - step, prec)
        b1 = sigma1_upper_boundary(x, prec)
        b2 = sigma1_upper_boundary(x + step, prec)
        d2 = b0 - 2 * b1 + b2
        if not d2.hi <= 0:
            ok = False
        count += 1
        x += step
    return ok, count


def contour_points(levels: Sequence[float] = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5), count: int = 360) -> list[tuple[float, float, float]]:
    """Float points on the level sets ``|z e^(1-z)| = L`` (for plotting)."""
    out = []
    for L in levels:
        target = math.log(L) - 1.0
        for i in range(count):
            phi = 2 * math.pi * i / count
            c = math.cos(phi)
            f = lambda r: math.log(r) - r * c - target
            brackets = []
            if c <= 0:
                brackets.append((1e-12, 50.0))
            else:
                peak = 1.0 / c
                brackets += [(1e-12, peak), (peak, 200.0)]
            for a, b in brackets:
                fa, fb = f(a), f(b)
                if fa * fb > 0:
                    continue
                if fa == 0 or fb == 0:
                    r = a if fa == 0 else b
                    out.append((round(r * c, 12), round(r * math.sin(phi), 12), L))
                    continue
                for _ in range(100):
                    m = 0.5 * (a + b)
                    if (f(m) > 0) == (fa > 0):
                        a, fa = m, f(m)
                    else:
                        b = m
                r = 0.5 * (a + b)
                out.append((round(r * c, 12), round(r * math.sin(phi), 12), L))
    return out


def rational_circle_points(radius, count: int, include_axis: bool = True) -> list[tuple[Fraction, Fraction]]:
    """Exact rational points on the circle of a rational radius (tangent half-angle)."""
    radius = Fraction(radius)
    pts = []
    for i in range(count):
        t = Fraction(2 * i - count, count) * 2 if count else Fraction(0)
        d = 1 + t * t
        pts.append((radius * (1 - t * t) / d, radius * 2 * t / d))
    if include_axis:
        pts.append((-radius, Fraction(0)))
    return pts


def left_arc_directions(count: int) -> list[tuple[Fraction, Fraction]]:
    """Exact unit vectors ``(cos, sin)`` with ``cos <= 0``, endpoints ``(0, +-1)`` included.

    Uses ``u = cot(phi/2)`` in ``[-1, 1]``: ``cos = (u^2-1)/(u^2+1)``, ``sin = 2u/(u^2+1)``.
    """
    if count < 2:
        raise ValueError("count must be at least 2")
    out = []
    for i in range(count):
        u = Fraction(2 * i - (count - 1), count - 1)
        d = 1 + u * u
        out.append(((u * u - 1) / d, 2 * u / d))
    return out


def left_arc_points(radius, count: int) -> list[tuple[Fraction, Fraction]]:
    """Rational points of the closed left half of the circle of a rational radius."""
    radius = Fraction(radius)
    return [(radius * c, radius * s) for c, s in left_arc_directions(count)]
