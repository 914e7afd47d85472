"""Certified extremal radii of the scaled regions ``S_n``.

Lower bounds come from exact rational witnesses on rational rays.  Upper
bounds come from an interval branch-and-bound that proves a semialgebraic set
empty; its box enclosures are produced by :mod:`taylorstab._kernels`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import _kernels
from .exactnum import DyadicInterval, Indeterminate, e as e_const, interval
from .region import (
    OriginClass,
    ZERO_ONLY,
    _exact_g_sign,
    complex_zeros,
    angle_to_t,
    origin_component_class,
    radial_slice_max,
    t_to_angle,
    v_plus,
)
from .rootiso import refine_root
from .taylorpoly import ComplexPoint, e_polynomial, ray_direction, scaled_partial_sum

__all__ = [
    "Mode",
    "RadiusCertificate",
    "BudgetExhausted",
    "NotApplicable",
    "max_modulus",
    "inner_semidisk_radius",
    "coverage_disk_check",
    "cor42_radius",
    "prove_empty",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 4_000_000
BOX_HALF_WIDTH = 2.05  # S_n lies in the closed disk of radius 2
_U = 2.0**-53


class Mode(enum.Enum):
    FULL = "Full"
    LEFT_HALF = "LeftHalf"
    INNER_SEMIDISK = "InnerSemiDisk"


@dataclass(frozen=True)
class RadiusCertificate:
    """Proven enclosure ``lo <= radius <= hi``.

    For the two outer modes the witness is a point of ``S_n`` with ``|w| = lo``.
    For the inner semi-disk the witness is a point outside ``S_n`` in the
    closed left half-plane with ``|w| = hi``.
    """

    n: int
    mode: Mode
    lo: Fraction
    hi: Fraction
    witness_re: Fraction
    witness_im: Fraction
    tol: Fraction
    boxes_processed: int

    @property
    def witness(self) -> ComplexPoint:
        return ComplexPoint.exact(self.witness_re, self.witness_im)

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def display(self, digits: int, direction: str = "up") -> tuple[Fraction, bool]:
        """Rounded display value and whether the rounding is certain.

        ``up`` rounds the lower end up, ``down`` rounds the upper end down.  The
        flag is false when a rounding boundary lies inside ``(lo, hi]``.
        """
        q = Fraction(10) ** digits
        if direction == "up":
            a = Fraction(math.ceil(self.lo * q), q)
            b = Fraction(math.ceil(self.hi * q), q)
        else:
            a = Fraction(math.floor(self.hi * q), q)
            b = Fraction(math.floor(self.lo * q), q)
        return a, a == b

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode.value,
            "lo": _qstr(self.lo),
            "hi": _qstr(self.hi),
            "witness": {"re": _qstr(self.witness_re), "im": _qstr(self.witness_im)},
            "tol": _qstr(self.tol),
            "boxes_processed": self.boxes_processed,
        }

    @classmethod
    def from_json(cls, d: dict) -> "RadiusCertificate":
        return cls(
            d["n"],
            Mode(d["mode"]),
            Fraction(d["lo"]),
            Fraction(d["hi"]),
            Fraction(d["witness"]["re"]),
            Fraction(d["witness"]["im"]),
            Fraction(d["tol"]),
            d.get("boxes_processed", 0),
        )


def _qstr(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


class BudgetExhausted(RuntimeError):
    def __init__(self, message: str, certificate: Optional[RadiusCertificate] = None, boxes: int = 0):
        super().__init__(message)
        self.certificate = certificate
        self.boxes = boxes


@dataclass(frozen=True)
class NotApplicable:
    n: int
    reason: str


# ---------------------------------------------------------------------------
# branch and bound
# ---------------------------------------------------------------------------


@dataclass
class _Outcome:
    empty: bool
    witness: Optional[tuple[Fraction, Fraction]]
    boxes: int


def _float_down(q: Fraction) -> float:
    f = float(q)
    return math.nextafter(f, -math.inf) if Fraction(f) > q else f


def _float_up(q: Fraction) -> float:
    f = float(q)
    return math.nextafter(f, math.inf) if Fraction(f) < q else f


def prove_empty(
    n: int,
    kind: str,
    r: Fraction,
    half: bool = True,
    budget: int = DEFAULT_BUDGET,
    y_neg_limit: Optional[Fraction] = None,
    backend: Optional[str] = None,
) -> _Outcome:
    """Branch-and-bound emptiness proof on the scaled region ``S_n``.

    ``kind='outer'``: ``{G <= 0, |z| > r, Im z >= 0}`` (and ``Re z <= 0`` if ``half``).
    ``kind='inner'``: ``{G > 0, |z| <= r, Re z <= 0, Im z >= 0}``; ``y_neg_limit``
    is a bound ``Y`` with ``E_n(n y) <= 0`` on ``[0, Y]``, enabling the
    monotonicity test along ``Re z``.

    Returns an outcome with an exact witness point when the set is nonempty.
    """
    r = Fraction(r)
    r2 = r * r
    r2_lo = _float_down(r2) * (1 - 4 * _U)
    r2_hi = _float_up(r2) * (1 + 4 * _U)
    r_up = _float_up(r) * (1 + 2 * _U)
    if kind == "outer":
        B = BOX_HALF_WIDTH
        xlo = np.array([-B]); xhi = np.array([0.0 if half else B])
        ylo = np.array([0.0]); yhi = np.array([B])
    elif kind == "inner":
        xlo = np.array([-r_up]); xhi = np.array([0.0])
        ylo = np.array([0.0]); yhi = np.array([r_up])
    else:
        raise ValueError(kind)
    ylim = -1.0 if y_neg_limit is None else _float_down(Fraction(y_neg_limit))
    processed = 0
    while xlo.size:
        processed += xlo.size
        if processed > budget:
            raise BudgetExhausted(f"box budget {budget} exceeded", boxes=processed)
        gmin, gmax, _, _ = _kernels.box_enclose(n, n, xlo, xhi, ylo, yhi, backend=backend)
        ax = np.maximum(np.abs(xlo), np.abs(xhi))
        ay = np.maximum(np.abs(ylo), np.abs(yhi))
        maxd2 = (ax * ax + ay * ay) * (1 + 4 * _U)
        nx = np.where((xlo <= 0) & (xhi >= 0), 0.0, np.minimum(np.abs(xlo), np.abs(xhi)))
        ny = np.where((ylo <= 0) & (yhi >= 0), 0.0, np.minimum(np.abs(ylo), np.abs(yhi)))
        mind2 = (nx * nx + ny * ny) * (1 - 4 * _U)
        if kind == "outer":
            keep = (maxd2 > r2_lo) & (gmin <= 0)
            hit = keep & (gmax <= 0)
            for i in np.flatnonzero(hit):
                w = _farthest_corner(xlo[i], xhi[i], ylo[i], yhi[i])
                if w[0] ** 2 + w[1] ** 2 > r2 and _exact_g_sign(n, w[0], w[1], True) <= 0:
                    return _Outcome(False, w, processed)
        else:
            keep = (mind2 <= r2_hi) & (gmax > 0)
            if ylim >= 0:
                yc = np.minimum(yhi, r_up)
                ok = keep & (yc <= ylim) & (ylo <= yc)
                idx = np.flatnonzero(ok)
                if idx.size:
                    _, _, hmin, _ = _kernels.box_enclose(
                        n, n, xlo[idx], np.zeros(idx.size), ylo[idx], yc[idx], backend=backend
                    )
                    keep[idx[hmin >= 0]] = False
            hit = keep & (gmin > 0)
            for i in np.flatnonzero(hit):
                w = _nearest_point(xlo[i], xhi[i], ylo[i], yhi[i])
                if w[0] ** 2 + w[1] ** 2 <= r2 and _exact_g_sign(n, w[0], w[1], True) > 0:
                    return _Outcome(False, w, processed)
        xlo, xhi, ylo, yhi = xlo[keep], xhi[keep], ylo[keep], yhi[keep]
        if not xlo.size:
            break
        wx = xhi - xlo
        wy = yhi - ylo
        if max(wx.max(), wy.max()) < 1e-15:
            raise BudgetExhausted("boxes shrank below double resolution", boxes=processed)
        sx = wx >= wy
        mx = np.where(sx, 0.5 * (xlo + xhi), xhi)
        my = np.where(sx, yhi, 0.5 * (ylo + yhi))
        # children: (xlo, mx, ylo, my) and (mx' , xhi, my', yhi)
        x2lo = np.where(sx, mx, xlo)
        y2lo = np.where(sx, ylo, my)
        xlo, xhi, ylo, yhi = (
            np.concatenate([xlo, x2lo]),
            np.concatenate([mx, xhi]),
            np.concatenate([ylo, y2lo]),
            np.concatenate([my, yhi]),
        )
    return _Outcome(True, None, processed)


def _farthest_corner(xlo, xhi, ylo, yhi) -> tuple[Fraction, Fraction]:
    x = xlo if abs(xlo) >= abs(xhi) else xhi
    y = ylo if abs(ylo) >= abs(yhi) else yhi
    return Fraction(x), Fraction(y)


def _nearest_point(xlo, xhi, ylo, yhi) -> tuple[Fraction, Fraction]:
    x = 0.0 if xlo <= 0 <= xhi else (xlo if abs(xlo) < abs(xhi) else xhi)
    y = 0.0 if ylo <= 0 <= yhi else (ylo if abs(ylo) < abs(yhi) else yhi)
    return Fraction(x), Fraction(y)


# ---------------------------------------------------------------------------
# float-grade radial profiles used only to pick directions
# ---------------------------------------------------------------------------


_R_GRID = np.linspace(0.0, BOX_HALF_WIDTH, 2101)


def _profile(n: int, phis: np.ndarray, which: str, rgrid: Optional[np.ndarray] = None) -> np.ndarray:
    """Float radial extent per direction: ``global`` or ``origin`` component.

    A custom ``rgrid`` restricts the ``global`` search to that radial window
    (0 is returned where no grid point is inside).
    """
    grid = _R_GRID if rgrid is None else rgrid
    c, s = np.cos(phis), np.sin(phis)
    R = grid[None, :]
    g = _kernels.g_values(n, n, R * c[:, None], R * s[:, None])
    inside = g <= 0
    out = np.empty(phis.size)
    for i in range(phis.size):
        row = inside[i]
        if which == "global":
            k = np.flatnonzero(row)
            if not k.size:
                out[i] = 0.0
                continue
            k = k[-1]
        else:
            bad = np.flatnonzero(~row[1:])
            k = bad[0] if bad.size else row.size - 1
        if k >= row.size - 1:
            out[i] = grid[-1]
            continue
        a, b = grid[k], grid[k + 1]
        for _ in range(60):
            m = 0.5 * (a + b)
            if _kernels.g_values(n, n, np.array([m * c[i]]), np.array([m * s[i]]))[0] <= 0:
                a = m
            else:
                b = m
        out[i] = a
    return out


def _golden(f, a: float, b: float, maximize: bool, iters: int = 60) -> float:
    sign = -1.0 if maximize else 1.0
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = sign * f(c), sign * f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = sign * f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = sign * f(d)
        if b - a < 1e-12:
            break
    return 0.5 * (a + b)


def _best_angle(n: int, lo_phi: float, hi_phi: float, which: str, maximize: bool, count: int = 721) -> float:
    phis = np.linspace(lo_phi, hi_phi, count)
    prof = _profile(n, phis, which)
    i = int(np.argmax(prof) if maximize else np.argmin(prof))
    a = phis[max(i - 1, 0)]
    b = phis[min(i + 1, count - 1)]
    return _golden(lambda p: _profile(n, np.array([p]), which)[0], a, b, maximize)


def _zero_seeds(n: int, lo_phi: float, hi_phi: float) -> list[tuple[float, float, float]]:
    """``(angle, modulus, bubble radius)`` of the upper-half-plane zeros of the scaled sum.

    Each zero sits in a small component of ``S_n`` of radius about ``1/|P'(zeta)|``;
    these components are too thin for the radial grid.
    """
    p = scaled_partial_sum(n)
    c = [float(Fraction(v, p.coeffs[0])) for v in p.coeffs]
    out = []
    for z in complex_zeros(p):
        w = complex(float(z.re.mid), float(z.im.mid))
        if w.imag < 0:
            continue
        phi = math.atan2(w.imag, w.real)
        if not lo_phi - 1e-12 <= phi <= hi_phi + 1e-12:
            continue
        d = sum(k * c[k] * w ** (k - 1) for k in range(1, len(c)))
        if d == 0:
            continue
        out.append((phi, abs(w), 1.0 / abs(d)))
    return out


def _bubble_angle(n: int, seed: tuple[float, float, float], lo_phi: float, hi_phi: float) -> float:
    """Direction reaching farthest inside the small component around one zero."""
    phi, r, rb = seed
    grid = np.linspace(max(r - 4 * rb, 0.0), r + 4 * rb, 801)
    w = 4 * rb / max(r, 1e-300)
    a, b = max(lo_phi, phi - w), min(hi_phi, phi + w)
    if b <= a:
        return phi
    return _golden(lambda q: _profile(n, np.array([q]), "global", grid)[0], a, b, True)


def _t_candidates(phi: float, lo_phi: float, hi_phi: float) -> list[Optional[Fraction]]:
    out = []
    for p in (phi, lo_phi, hi_phi):
        if abs(p - math.pi) < 1e-9:
            out.append(None)
        elif abs(p - math.pi / 2) < 1e-9:
            out.append(Fraction(1))
        elif abs(p) < 1e-9:
            out.append(Fraction(0))
        else:
            out.append(angle_to_t(p, 1e-9))
    seen = []
    for t in out:
        if t not in seen:
            seen.append(t)
    return seen


# ---------------------------------------------------------------------------
# outer radii
# ---------------------------------------------------------------------------


def _ray_witness_outer(n: int, t: Optional[Fraction], width: Fraction):
    """Feasible point on the ray farthest from 0, as ``(r, (x, y))``; None if none."""
    rs = radial_slice_max(n, t)
    box = rs.global_max
    if box is ZERO_ONLY:
        return Fraction(0), (Fraction(0), Fraction(0))
    from .taylorpoly import ray_poly

    box = refine_root(box, ray_poly(n, t), width)
    c, s = ray_direction(t)
    for r in (box.lo, box.hi) if box.is_exact else (box.lo,):
        x, y = r * c, r * s
        if _exact_g_sign(n, x, y, True) <= 0:
            return r, (x, y)
    return None


def max_modulus(
    n: int,
    half_plane_only: bool = False,
    tol: Fraction = Fraction(1, 10**6),
    budget: int = DEFAULT_BUDGET,
    backend: Optional[str] = None,
) -> RadiusCertificate:
    """Certified ``max |z|`` over ``S_n`` (or ``S_n`` with ``Re z <= 0``)."""
    if n < 1:
        raise ValueError("n must be positive")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    mode = Mode.LEFT_HALF if half_plane_only else Mode.FULL
    lo_phi = math.pi / 2 if half_plane_only else 0.0
    hi_phi = math.pi
    phi = _best_angle(n, lo_phi, hi_phi, "global", maximize=True)
    best: Optional[tuple[Fraction, tuple[Fraction, Fraction]]] = None
    for seed in _zero_seeds(n, lo_phi, hi_phi):
        if seed[1] + 4 * seed[2] < _profile(n, np.array([phi]), "global")[0]:
            continue
        for q in {seed[0], _bubble_angle(n, seed, lo_phi, hi_phi)}:
            t = angle_to_t(q, 1e-4 * seed[2] / seed[1]) if q < math.pi - 1e-12 else None
            got = _ray_witness_outer(n, t, tol / 16)
            if got is not None and (best is None or got[0] > best[0]):
                best = got
    total = 0
    for _ in range(8):
        for t in _t_candidates(phi, lo_phi, hi_phi):
            got = _ray_witness_outer(n, t, tol / 16)
            if got is not None and (best is None or got[0] > best[0]):
                best = got
        lo, w = best
        hi = lo + tol / 2
        try:
            out = prove_empty(n, "outer", hi, half_plane_only, budget - total, backend=backend)
        except BudgetExhausted as exc:
            cert = RadiusCertificate(n, mode, lo, Fraction(BOX_HALF_WIDTH), w[0], w[1], tol, total + exc.boxes)
            raise BudgetExhausted(str(exc), cert, total + exc.boxes) from None
        total += out.boxes
        if out.empty:
            return RadiusCertificate(n, mode, lo, hi, w[0], w[1], tol, total)
        # a feasible point beyond the current bound: search near its angle
        wx, wy = out.witness
        phi = math.atan2(float(wy), float(wx))
        phi = _golden(lambda p: _profile(n, np.array([p]), "global")[0],
                      max(lo_phi, phi - 0.01), min(hi_phi, phi + 0.01), True)
        cand = _ray_witness_outer(n, angle_to_t(phi, 1e-9) if phi < math.pi - 1e-12 else None, tol / 16)
        if cand is not None and cand[0] > best[0]:
            best = cand
        wr2 = wx * wx + wy * wy
        if best[0] * best[0] < wr2:
            # fall back to the exact witness itself (rational lower bound on |w|)
            best = (_sqrt_down(wr2), (wx, wy))
    raise BudgetExhausted("outer search did not settle", None, total)


def _sqrt_down(q: Fraction, bits: int = 80) -> Fraction:
    """Rational lower bound of ``sqrt(q)`` within ``2**-bits``."""
    num = q.numerator << (2 * bits)
    root = math.isqrt(num // q.denominator)
    return Fraction(root, 1 << bits)


def cor42_radius(n: int, delta: Fraction = Fraction(1, 10), prec: int = 96) -> DyadicInterval:
    """Enclosure of ``1/e + (2 + delta) sqrt(e^2 + 1) / sqrt(n)``."""
    e = e_const(prec)
    one = interval(1, prec=prec)
    return one / e + (interval(2, prec=prec) + interval(delta, prec=prec)) * (e * e + one).sqrt() / interval(n, prec=prec).sqrt()


def coverage_disk_check(
    n: int,
    radius: Union[Fraction, str, DyadicInterval] = "cor42",
    half_plane_only: bool = True,
    delta: Fraction = Fraction(1, 10),
    budget: int = DEFAULT_BUDGET,
    backend: Optional[str] = None,
) -> bool:
    """Whether ``S_n`` (left half, or all of it) lies in the closed disk of the given radius.

    ``True`` is a proof, ``False`` comes with an exact feasible point outside
    the disk, and :class:`Indeterminate` is raised when the budget runs out.
    """
    if isinstance(radius, str):
        if radius.lower() != "cor42":
            raise ValueError(f"unknown radius formula {radius!r}")
        radius = cor42_radius(n, delta)
    if isinstance(radius, DyadicInterval):
        radius = radius.lo
    radius = Fraction(radius)
    try:
        out = prove_empty(n, "outer", radius, half_plane_only, budget, backend=backend)
    except BudgetExhausted as exc:
        raise Indeterminate(f"coverage check undecided for n={n}, r={float(radius)}: {exc}") from None
    return out.empty


# ---------------------------------------------------------------------------
# inner semi-disk
# ---------------------------------------------------------------------------


def _ray_witness_inner(n: int, t: Optional[Fraction], width: Fraction):
    """First point of the ray outside ``S_n`` (just past the origin component)."""
    from .taylorpoly import ray_poly

    rs = radial_slice_max(n, t)
    box = rs.origin_max
    if box is ZERO_ONLY:
        return None
    box = refine_root(box, ray_poly(n, t), width)
    c, s = ray_direction(t)
    r = box.hi
    x, y = r * c, r * s
    if box.is_exact:
        # step just past an exact root
        r = box.hi + width
        x, y = r * c, r * s
    if _exact_g_sign(n, x, y, True) > 0:
        return r, (x, y)
    return None


def inner_semidisk_radius(
    n: int,
    tol: Fraction = Fraction(1, 10**6),
    budget: int = DEFAULT_BUDGET,
    backend: Optional[str] = None,
) -> Union[RadiusCertificate, NotApplicable]:
    """Largest ``rho`` with the closed left half of the disk ``D_rho`` inside ``S_n``."""
    if n < 1:
        raise ValueError("n must be positive")
    tol = Fraction(tol)
    if origin_component_class(n) is OriginClass.SINGLETON:
        return NotApplicable(n, "the origin component of the imaginary-axis slice is a singleton")
    y1 = v_plus(n)[0].hi
    y1 = refine_root(y1, e_polynomial(n), tol * n / 64)
    y_ok = y1.lo / n
    # seed: the axis point just past y_{n,1}
    best = (y1.hi / n, (Fraction(0), y1.hi / n))
    if _exact_g_sign(n, best[1][0], best[1][1], True) <= 0:
        raise AssertionError("axis witness failed")
    phi = _best_angle(n, math.pi / 2, math.pi, "origin", maximize=False)
    for t in _t_candidates(phi, math.pi / 2, math.pi):
        got = _ray_witness_inner(n, t, tol / 16)
        if got is not None and got[0] < best[0]:
            best = got
    total = 0
    for _ in range(8):
        hi, w = best
        lo = hi - tol / 2
        try:
            out = prove_empty(n, "inner", lo, True, budget - total, y_neg_limit=y_ok, backend=backend)
        except BudgetExhausted as exc:
            cert = RadiusCertificate(n, Mode.INNER_SEMIDISK, Fraction(0), hi, w[0], w[1], tol, total + exc.boxes)
            raise BudgetExhausted(str(exc), cert, total + exc.boxes) from None
        total += out.boxes
        if out.empty:
            return RadiusCertificate(n, Mode.INNER_SEMIDISK, lo, hi, w[0], w[1], tol, total)
        wx, wy = out.witness
        phi = math.atan2(float(wy), float(wx))
        phi = _golden(lambda p: _profile(n, np.array([p]), "origin")[0],
                      max(math.pi / 2, phi - 0.01), min(math.pi, phi + 0.01), False)
        cand = _ray_witness_inner(n, angle_to_t(phi, 1e-9) if phi < math.pi - 1e-12 else None, tol / 16)
        if cand is not None and cand[0] < best[0]:
            best = cand
        wr2 = wx * wx + wy * wy
        if best[0] * best[0] > wr2:
            best = (_sqrt_up(wr2), (wx, wy))
    raise BudgetExhausted("inner search did not settle", None, total)


def _sqrt_up(q: Fraction, bits: int = 80) -> Fraction:
    lo = _sqrt_down(q, bits)
    return lo if lo * lo == q else lo + Fraction(1, 1 << bits)
