"""Stability-region membership, imaginary-axis slices, radial slices and traces."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernels
from .exactnum import DEFAULT_PREC, DyadicInterval, max_precision
from .rootiso import RootBox, isolate_real_roots, refine_root, smallest_abs_root
from .taylorpoly import ComplexPoint, IntPoly, e_polynomial, line_poly, ray_direction, ray_poly

__all__ = [
    "Status",
    "Membership",
    "contains",
    "SliceInterval",
    "SliceDecomposition",
    "v_plus",
    "max_v_plus",
    "OriginClass",
    "origin_component_class",
    "TraceSample",
    "BoundaryTrace",
    "boundary_trace",
    "snap_dyadic",
    "ZERO_ONLY",
    "RadialSlice",
    "radial_slice_max",
    "angle_to_t",
    "t_to_angle",
    "ConvergenceFailure",
    "complex_zeros",
    "run_lengths",
]


class Status(enum.Enum):
    INSIDE = "Inside"
    OUTSIDE = "Outside"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class Membership:
    status: Status
    width: float = 0.0

    def __eq__(self, other):
        if isinstance(other, Status):
            return self.status is other
        if isinstance(other, Membership):
            return self.status is other.status and self.width == other.width
        return NotImplemented

    __hash__ = object.__hash__


def _as_point(z) -> Union[tuple[Fraction, Fraction], ComplexPoint]:
    if isinstance(z, ComplexPoint):
        if z.re.is_point() and z.im.is_point():
            return z.re.lo, z.im.lo
        return z
    if isinstance(z, tuple):
        return Fraction(z[0]), Fraction(z[1])
    if isinstance(z, complex):
        return Fraction(z.real), Fraction(z.imag)
    return Fraction(z), Fraction(0)


def _exact_g_sign(n: int, x: Fraction, y: Fraction, scaled: bool) -> int:
    m = n if scaled else 1
    D = math.lcm(x.denominator, y.denominator)
    a, b = int(x * m * D), int(y * m * D)
    fn = math.factorial(n)
    # sum_k (n!/k!) (a+ib)^k D^(n-k), Horner
    re, im = 1, 0
    dp = 1
    for k in range(n - 1, -1, -1):
        dp *= D
        re, im = re * a - im * b + (fn // math.factorial(k)) * dp, re * b + im * a
    v = re * re + im * im - (fn * dp) ** 2
    return (v > 0) - (v < 0)


def contains(n: int, z, scaled: bool = False, prec: int = DEFAULT_PREC, resolution: float = 2.0**-200) -> Membership:
    """Certified classification of ``z`` against ``{|sum (mz)^k/k!| <= 1}``.

    Rational input is decided exactly.  For interval input the precision is
    doubled until the sign of ``G_n`` is known or the enclosure width falls
    below ``resolution``, in which case ``Boundary`` carries that width.
    """
    if n < 1:
        raise ValueError("n must be positive")
    pt = _as_point(z)
    if isinstance(pt, tuple):
        s = _exact_g_sign(n, pt[0], pt[1], scaled)
        return Membership({-1: Status.INSIDE, 0: Status.BOUNDARY, 1: Status.OUTSIDE}[s], 0.0)
    m = n if scaled else 1
    p = prec
    while True:
        w = ComplexPoint(pt.re.at_prec(p), pt.im.at_prec(p)) * m
        acc = ComplexPoint.exact(1, 0, p)
        term = ComplexPoint.exact(1, 0, p)
        for k in range(1, n + 1):
            term = term * w * Fraction(1, k)
            acc = acc + term
        g = acc.abs2() - 1
        if g.hi < 0:
            return Membership(Status.INSIDE, 0.0)
        if g.lo > 0:
            return Membership(Status.OUTSIDE, 0.0)
        width = float(g.width)
        if width <= resolution or p >= max_precision():
            return Membership(Status.BOUNDARY, width)
        p *= 2


# ---------------------------------------------------------------------------
# imaginary-axis slices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SliceInterval:
    lo: RootBox
    hi: RootBox
    degenerate: bool


@dataclass(frozen=True)
class SliceDecomposition:
    n: int
    intervals: tuple[SliceInterval, ...]

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __getitem__(self, i):
        return self.intervals[i]

    def refined(self, width: Fraction = Fraction(1, 10**12)) -> "SliceDecomposition":
        """Same decomposition with every endpoint box narrowed to ``width``."""
        p = e_polynomial(self.n)
        ivs = tuple(SliceInterval(refine_root(iv.lo, p, width), refine_root(iv.hi, p, width), iv.degenerate)
                    for iv in self.intervals)
        return SliceDecomposition(self.n, ivs)

    def rows(self, digits: int = 12) -> list[tuple]:
        """CSV rows ``(n, k, lo, hi, degenerate)`` with refined endpoint midpoints."""
        out = []
        for k, iv in enumerate(self.refined(Fraction(1, 10 ** (digits + 1))).intervals, 1):
            out.append((self.n, k, _fmt(iv.lo.mid, digits), _fmt(iv.hi.mid, digits), int(iv.degenerate)))
        return out


def _fmt(q: Fraction, digits: int) -> str:
    return f"{float(q):.{digits}g}"


@lru_cache(maxsize=None)
def _e_roots(n: int) -> tuple[RootBox, ...]:
    return tuple(isolate_real_roots(e_polynomial(n), (Fraction(0), None)))


def v_plus(n: int) -> SliceDecomposition:
    """Components of ``{y >= 0 : E_n(y) <= 0}`` in increasing order."""
    if n < 1:
        raise ValueError("n must be positive")
    roots = _e_roots(n)
    intervals = []
    start = None
    for r in roots:
        if start is None:
            if r.sign_right < 0:
                start = r
            elif r.sign_right > 0:
                intervals.append(SliceInterval(r, r, True))
        else:
            if r.sign_right > 0:
                intervals.append(SliceInterval(start, r, False))
                start = None
    if start is not None:  # cannot happen: E_n -> +inf
        raise AssertionError("unterminated slice interval")
    return SliceDecomposition(n, tuple(intervals))


def max_v_plus(n: int, width: Optional[Fraction] = None) -> RootBox:
    """Largest root of ``E_n`` on ``[0, inf)``, optionally refined to ``width``."""
    box = _e_roots(n)[-1]
    if width is not None:
        box = refine_root(box, e_polynomial(n), width)
    return box


class OriginClass(enum.Enum):
    SINGLETON = "Singleton"
    POSITIVE_INTERVAL = "PositiveInterval"


def origin_component_class(n: int) -> OriginClass:
    """Whether the component of ``V_n^+`` at 0 is ``{0}``, from the lowest coefficient of ``E_n``."""
    e = e_polynomial(n)
    low = next(c for c in e.coeffs if c)
    sign = (low > 0) == (e.scale > 0)
    return OriginClass.SINGLETON if sign else OriginClass.POSITIVE_INTERVAL


def run_lengths(values: Sequence[float]) -> list[int]:
    """Lengths of maximal non-decreasing runs."""
    if not values:
        return []
    out = []
    run = 1
    for a, b in zip(values, values[1:]):
        if b >= a:
            run += 1
        else:
            out.append(run)
            run = 1
    out.append(run)
    return out


# ---------------------------------------------------------------------------
# boundary trace
# ---------------------------------------------------------------------------


SNAP_BITS = 40


def snap_dyadic(y, bits: int = SNAP_BITS) -> Fraction:
    """Nearest multiple of ``2**-bits``; dyadic input is kept unchanged."""
    q = Fraction(y)
    if q.denominator & (q.denominator - 1) == 0 and q.denominator <= 2**bits:
        return q
    return Fraction(round(q * 2**bits), 2**bits)


@dataclass(frozen=True)
class TraceSample:
    y: Fraction
    sign: int
    log10_abs: Optional[DyadicInterval]
    exact_zero: bool
    root: Optional[RootBox]

    @property
    def none(self) -> bool:
        return self.root is None and not self.exact_zero

    def inverse_log(self) -> Optional[float]:
        """``sign(x) * (-1/log10|x|)``; 0 for an exact zero."""
        if self.exact_zero:
            return 0.0
        if self.log10_abs is None:
            return None
        return self.sign * (-1.0 / float(self.log10_abs.mid))

    def value(self) -> Optional[float]:
        if self.exact_zero:
            return 0.0
        return None if self.root is None else float(self.root.mid)


@dataclass(frozen=True)
class BoundaryTrace:
    n: int
    samples: tuple[TraceSample, ...]
    log_scale: bool = True

    def rows(self) -> list[tuple]:
        out = []
        for s in self.samples:
            if s.exact_zero:
                out.append((self.n, float(s.y), 0, "-inf"))
            elif s.log10_abs is None:
                out.append((self.n, float(s.y), "", ""))
            else:
                out.append((self.n, float(s.y), s.sign, f"{float(s.log10_abs.mid):.7f}"))
        return out


_LOG_REL = Fraction(1, 2**24)


def _trace_one(n: int, y: Fraction) -> TraceSample:
    p = line_poly(n, (0, y), (1, 0))
    box = smallest_abs_root(p)
    if box is None:
        return TraceSample(y, 0, None, False, None)
    if box.is_exact and box.lo == 0:
        return TraceSample(y, 0, None, True, box)
    box = refine_root(box, p, _LOG_REL, relative=True)
    sign = 1 if box.lo > 0 else -1
    a, b = sorted((abs(box.lo), abs(box.hi)))
    mag = DyadicInterval(a, b, prec=96)
    return TraceSample(y, sign, mag.log10(), False, box)


def boundary_trace(n: int, ys: Sequence, log_scale: bool = True, jobs: int = 1) -> BoundaryTrace:
    """Smallest-``|x|`` root of ``x -> G_n(x, y)`` (unscaled) for each ``y``."""
    if n < 1:
        raise ValueError("n must be positive")
    snapped = [snap_dyadic(y) for y in ys]
    if any(y < 0 for y in snapped):
        raise ValueError("y must be nonnegative")
    if jobs > 1 and len(snapped) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            samples = list(ex.map(_trace_one, [n] * len(snapped), snapped))
    else:
        samples = [_trace_one(n, y) for y in snapped]
    return BoundaryTrace(n, tuple(samples), log_scale)


# ---------------------------------------------------------------------------
# radial slices (scaled region)
# ---------------------------------------------------------------------------


class _ZeroOnly:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ZERO_ONLY"

    def __reduce__(self):
        return (_ZeroOnly, ())


ZERO_ONLY = _ZeroOnly()


@dataclass(frozen=True)
class RadialSlice:
    """Extent of ``S_n`` along one ray.

    ``global_max`` is the largest ``r`` with ``G <= 0``; ``origin_max`` is the
    right end of the component of ``{r : G <= 0}`` that contains 0.
    """

    t: Optional[Fraction]
    global_max: Union[RootBox, _ZeroOnly]
    origin_max: Union[RootBox, _ZeroOnly]

    @property
    def phi(self) -> float:
        return t_to_angle(self.t)

    def as_floats(self) -> tuple[float, float]:
        g = 0.0 if self.global_max is ZERO_ONLY else float(self.global_max.mid)
        o = 0.0 if self.origin_max is ZERO_ONLY else float(self.origin_max.mid)
        return g, o


def t_to_angle(t: Optional[Fraction]) -> float:
    if t is None:
        return math.pi
    return 2.0 * math.atan(float(t))


def angle_to_t(phi: float, tol: float = 1e-7) -> Optional[Fraction]:
    """Rational tangent half-angle whose direction is within ``tol`` of ``phi``."""
    if abs(phi - math.pi) < tol:
        return None
    target = math.tan(phi / 2.0)
    den = 1
    while True:
        t = Fraction(target).limit_denominator(den)
        if abs(t_to_angle(t) - phi) < tol:
            return t
        den *= 4


def radial_slice_max(n: int, t: Optional[Fraction], width: Optional[Fraction] = None) -> RadialSlice:
    """Radial extent of ``S_n`` in the direction with tangent half-angle ``t``.

    ``t=None`` selects the negative real axis.  Boxes are refined to ``width``
    when given.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if t is not None:
        t = Fraction(t)
        if t < 0:
            raise ValueError("t must be nonnegative")
    g = ray_poly(n, t)
    roots = isolate_real_roots(g, (Fraction(0), None))
    zero = roots[0]
    positive = [r for r in roots if r.hi > 0 and not (r.is_exact and r.lo == 0)]
    if zero.sign_right > 0:
        origin_max = ZERO_ONLY
    else:
        origin_max = next((r for r in positive if r.sign_right > 0), ZERO_ONLY)
    global_max = positive[-1] if positive else ZERO_ONLY
    if width is not None:
        if origin_max is not ZERO_ONLY:
            origin_max = refine_root(origin_max, g, width)
        if global_max is not ZERO_ONLY:
            global_max = refine_root(global_max, g, width)
    return RadialSlice(t, global_max, origin_max)


# ---------------------------------------------------------------------------
# complex zeros (float grade)
# ---------------------------------------------------------------------------


class ConvergenceFailure(RuntimeError):
    pass


def _balanced_coeffs(p: IntPoly) -> tuple[np.ndarray, float]:
    """Float coefficients of ``p(s w)`` with ``s`` chosen to balance magnitudes."""
    c = list(p.coeffs)
    d = len(c) - 1
    logs = [math.log(abs(v)) if v else None for v in c]
    s_log = (logs[0] - logs[d]) / d if logs[0] is not None else 0.0
    ref = max(l + k * s_log for k, l in enumerate(logs) if l is not None)
    out = np.zeros(d + 1)
    for k, (v, l) in enumerate(zip(c, logs)):
        if l is not None:
            e = l + k * s_log - ref
            out[k] = math.copysign(math.exp(e), v) if e > -700 else 0.0
    return out, math.exp(s_log)


def complex_zeros(
    p: IntPoly,
    max_iter: int = 2000,
    residual: float = 1e-8,
    backend: Optional[str] = None,
) -> list[ComplexPoint]:
    """Float-grade zeros by Aberth iteration, residual-checked.

    Zeros at the origin are split off exactly.  Each returned zero satisfies
    ``|p(z)| < residual * sum |a_k| |z|^k`` in double precision.
    """
    if p.degree < 1:
        raise ValueError("degree must be at least 1")
    c = list(p.coeffs)
    k0 = 0
    while c[k0] == 0:
        k0 += 1
    core = IntPoly(tuple(c[k0:]))
    zeros: list[complex] = [0j] * k0
    if core.degree >= 1:
        a, s = _balanced_coeffs(core)
        d = core.degree
        r0 = abs(a[0] / a[d]) ** (1.0 / d) if a[0] else 1.0
        ang = 2 * np.pi * np.arange(d) / d + 0.4
        z0 = r0 * np.exp(1j * ang)
        w, it = _kernels.aberth(a, z0, max_iter=max_iter, backend=backend)
        for wi in w:
            num = abs(np.polyval(a[::-1], wi))
            den = np.polyval(np.abs(a[::-1]), abs(wi))
            if not num <= residual * den:
                if it < 0:
                    raise ConvergenceFailure(f"Aberth iteration did not converge in {max_iter} steps")
                raise ConvergenceFailure(f"residual {num / den:.2e} above threshold")
        zeros += [complex(s * wi) for wi in w]
    zeros.sort(key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    return [ComplexPoint.exact(Fraction(z.real), Fraction(z.imag)) for z in zeros]
