"""Certified real-root isolation for integer polynomials.

Isolation uses Descartes' rule of signs with bisection (Vincent-Collins-Akritas
style) on the square-free part.  All arithmetic is on Python integers; interval
endpoints are dyadic rationals held as :class:`fractions.Fraction`.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .taylorpoly import IntPoly

__all__ = [
    "RootBox",
    "isolate_real_roots",
    "refine_root",
    "smallest_abs_root",
    "squarefree_factors",
    "sign_at",
    "descartes_count",
]

_PRIMES = (2305843009213693951, 4611686018427387847, 9223372036854775783, 1152921504606846883)


@dataclass(frozen=True)
class RootBox:
    """Closed interval ``[lo, hi]`` holding exactly one distinct real root.

    ``sign_left``/``sign_right`` are the signs of the isolated polynomial on the
    open gaps adjacent to the box.  ``lo == hi`` means the root is known exactly.
    """

    lo: Fraction
    hi: Fraction
    multiplicity: int
    sign_left: int
    sign_right: int

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def negate(self) -> "RootBox":
        return RootBox(-self.hi, -self.lo, self.multiplicity, self.sign_right, self.sign_left)

    def __repr__(self):
        return f"RootBox([{float(self.lo)!r}, {float(self.hi)!r}], m={self.multiplicity})"


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, ascending)
# ---------------------------------------------------------------------------


def _strip(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def sign_at(c: Sequence[int], x: Fraction) -> int:
    """Exact sign of ``sum c[k] x^k`` at a rational point."""
    p, q = x.numerator, x.denominator
    acc = 0
    qk = 1
    for a in reversed(c):
        acc = acc * p + a * qk
        qk *= q
    return _sign(acc)


def _variations(c: Sequence[int]) -> int:
    v = 0
    last = 0
    for a in c:
        if a:
            if last and (a > 0) != (last > 0):
                v += 1
            last = a
    return v


def _taylor_shift(c: list[int], t: int) -> list[int]:
    """Coefficients of ``p(x + t)``."""
    a = list(c)
    n = len(a)
    if t == 0 or n < 2:
        return a
    if t == 1:
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                a[j] += a[j + 1]
    else:
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                a[j] += t * a[j + 1]
    return a


def _trim_twos(c: list[int]) -> list[int]:
    tz = min(((a & -a).bit_length() - 1 for a in c if a), default=0)
    return [a >> tz for a in c] if tz > 0 else c


def _compose_interval(c: Sequence[int], a: Fraction, b: Fraction) -> list[int]:
    """Integer multiple of ``p(a + (b - a) x)``."""
    d = len(c) - 1
    D = math.lcm(a.denominator, b.denominator)
    A = a.numerator * (D // a.denominator)
    H = b.numerator * (D // b.denominator) - A
    if D & (D - 1) == 0:
        s = D.bit_length() - 1
        c1 = [ck << (s * (d - k)) for k, ck in enumerate(c)]
    else:
        c1 = [ck * D ** (d - k) for k, ck in enumerate(c)]
    c2 = _taylor_shift(c1, A)
    hk = 1
    c3 = []
    for ck in c2:
        c3.append(ck * hk)
        hk *= H
    return _trim_twos(c3)


def descartes_count(c: Sequence[int], a: Fraction, b: Fraction) -> int:
    """Descartes bound on the number of roots in the open interval ``(a, b)``.

    Exact when the result is 0 or 1.
    """
    q = _compose_interval(c, a, b)
    q.reverse()
    if _variations(q) == 0:
        return 0
    return _variations(_taylor_shift(q, 1))


# ---------------------------------------------------------------------------
# square-free decomposition
# ---------------------------------------------------------------------------


def _mod_poly(c, p):
    r = [a % p for a in c]
    while r and r[-1] == 0:
        r.pop()
    return r


def _mod_gcd_degree(f, g, p) -> int:
    while g:
        inv = pow(g[-1], -1, p)
        while len(f) >= len(g):
            coef = f[-1] * inv % p
            shift = len(f) - len(g)
            for i, gi in enumerate(g):
                f[i + shift] = (f[i + shift] - coef * gi) % p
            while f and f[-1] == 0:
                f.pop()
            if not f:
                break
        f, g = g, f
    return len(f) - 1


def _squarefree_modular(c: Sequence[int]) -> bool:
    """True when ``gcd(p, p') = 1`` modulo some good prime, which proves square-freeness."""
    d = len(c) - 1
    if d <= 1:
        return True
    dc = [k * a for k, a in enumerate(c)][1:]
    for p in _PRIMES:
        if c[-1] % p == 0 or (d * c[-1]) % p == 0:
            continue
        if _mod_gcd_degree(_mod_poly(c, p), _mod_poly(dc, p), p) == 0:
            return True
    return False


@lru_cache(maxsize=256)
def _sqf_list(c: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    if _squarefree_modular(c):
        return ((c, 1),)
    from sympy.polys.domains import ZZ
    from sympy.polys.sqfreetools import dup_sqf_list

    _, factors = dup_sqf_list([ZZ(a) for a in reversed(c)], ZZ)
    return tuple((tuple(int(a) for a in reversed(f)), m) for f, m in factors)


def squarefree_factors(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Square-free decomposition ``p = const * prod f_i^m_i`` over the integers."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    return [(IntPoly(f), m) for f, m in _sqf_list(p.coeffs) if len(f) > 1]


def _sqf_part(c: tuple[int, ...]) -> tuple[int, ...]:
    facs = [f for f, _ in _sqf_list(c) if len(f) > 1]
    if len(facs) == 1:
        return facs[0]
    out = IntPoly((1,))
    for f in facs:
        out = out * IntPoly(f)
    return out.coeffs


# ---------------------------------------------------------------------------
# isolation
# ---------------------------------------------------------------------------


def _pow2_floor(x: Fraction) -> Fraction:
    e = x.numerator.bit_length() - x.denominator.bit_length()
    v = Fraction(2) ** e
    while v > x:
        v /= 2
    while v * 2 <= x:
        v *= 2
    return v


def _root_bounds(c: Sequence[int]) -> tuple[Fraction, Fraction]:
    """``(L, U)``: every real root satisfies ``L <= |x| <= U`` (``c[0] != 0``)."""
    a0, ad = abs(c[0]), abs(c[-1])
    m_hi = max(abs(a) for a in c[:-1])
    m_lo = max((abs(a) for a in c[1:]), default=0)
    U = 1 + Fraction(m_hi, ad)
    L = Fraction(a0, a0 + m_lo)
    u = _pow2_floor(U)
    if u < U:
        u *= 2
    return _pow2_floor(L) / 2, u


def _split_point(c, a: Fraction, b: Fraction) -> Fraction:
    """A dyadic split point in ``(a, b)``: geometric for wide positive ranges."""
    if a > 0 and b > 4 * a:
        ea = a.numerator.bit_length() - a.denominator.bit_length()
        eb = b.numerator.bit_length() - b.denominator.bit_length()
        m = Fraction(2) ** ((ea + eb) // 2)
        if a < m < b:
            return m
    return (a + b) / 2


def _isolate_open(c: tuple[int, ...], a: Fraction, b: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the roots of square-free ``c`` in ``(a, b)``.

    Returned intervals are closed, ordered, and have non-root endpoints unless
    they are exact points.
    """
    out = []
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        v = descartes_count(c, lo, hi)
        if v == 0:
            continue
        if v == 1:
            out.append((lo, hi))
            continue
        m = _split_point(c, lo, hi)
        if sign_at(c, m) == 0:
            out.append((m, m))
        stack.append((lo, m))
        stack.append((m, hi))
    out.sort()
    return [_detach(c, box, out) for box in out]


def _detach(c, box, all_boxes):
    """Shrink a box so neither endpoint is a root (only matters beside exact roots)."""
    lo, hi = box
    if lo == hi:
        return box
    if sign_at(c, lo) == 0:
        lo = _step_off(c, lo, hi)
    if sign_at(c, hi) == 0:
        hi = _step_off(c, hi, lo)
    return (lo, hi)


def _step_off(c, e: Fraction, other: Fraction) -> Fraction:
    """Point strictly between the root ``e`` and the next root toward ``other``."""
    dc = [k * a for k, a in enumerate(c)][1:]
    direction = 1 if other > e else -1
    near = sign_at(dc, e) * direction  # sign of c just past e
    far = sign_at(c, other)
    step = (other - e) / 2
    while True:
        m = e + step
        s = sign_at(c, m)
        if s == near and (s != far or descartes_count(c, min(m, other), max(m, other)) == 1):
            return m
        step /= 2


def _finalize(p: tuple[int, ...], sqf: tuple[int, ...], facs, boxes) -> list[RootBox]:
    out = []
    for lo, hi in boxes:
        if lo == hi:
            mult = next((m for f, m in facs if sign_at(f, lo) == 0), 1)
            sl = _side_sign(p, lo, -1, mult)
            sr = _side_sign(p, lo, 1, mult)
        else:
            if len(facs) == 1:
                mult = facs[0][1]
            else:
                mult = next(m for f, m in facs if len(f) > 1 and _has_root(f, lo, hi))
            sl = sign_at(p, lo)
            sr = sign_at(p, hi)
        out.append(RootBox(lo, hi, mult, sl, sr))
    return out


def _has_root(f, lo, hi) -> bool:
    s1, s2 = sign_at(f, lo), sign_at(f, hi)
    if s1 * s2 < 0:
        return True
    return descartes_count(f, lo, hi) == 1


def _side_sign(c, r: Fraction, direction: int, mult: int) -> int:
    """Sign of ``c`` just to the given side of its root ``r`` of multiplicity ``mult``."""
    d = list(c)
    for _ in range(mult):
        d = [k * a for k, a in enumerate(d)][1:]
    s = sign_at(d, r)
    return s * (direction**mult)


def _strip_zero(c: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    k = 0
    while k < len(c) and c[k] == 0:
        k += 1
    return c[k:], k


def isolate_real_roots(
    p: IntPoly,
    domain: Optional[tuple[Optional[Fraction], Optional[Fraction]]] = None,
) -> list[RootBox]:
    """Isolate every real root of ``p`` in a closed domain.

    ``domain`` is ``(a, b)``; either end may be ``None`` for an infinite end.
    The whole line is the default.
    """
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    a, b = domain if domain is not None else (None, None)
    a = None if a is None else Fraction(a)
    b = None if b is None else Fraction(b)
    if a is not None and b is not None and a > b:
        raise ValueError("empty domain")
    coeffs = p.coeffs if p.scale > 0 else tuple(-v for v in p.coeffs)
    core, k0 = _strip_zero(coeffs)
    if len(core) == 1:
        boxes: list[RootBox] = []
        if k0 and _in_closed(0, a, b):
            boxes.append(RootBox(Fraction(0), Fraction(0), k0, _sign(core[0]) * (-1) ** k0, _sign(core[0])))
        return boxes
    facs = _sqf_list(core)
    sqf = _sqf_part(core)
    Lb, Ub = _root_bounds(sqf)
    found: list[tuple[Fraction, Fraction]] = []
    # positive side
    plo = Lb if a is None or a <= 0 else max(a, Lb)
    phi = Ub if b is None else min(b, Ub)
    if plo < phi:
        found += _isolate_open(sqf, plo, phi)
    # negative side via x -> -x
    neg = tuple(v if i % 2 == 0 else -v for i, v in enumerate(sqf))
    nlo = Lb if b is None or b >= 0 else max(-b, Lb)
    nhi = Ub if a is None else min(-a, Ub)
    if nlo < nhi:
        found += [(-h, -l) for l, h in _isolate_open(neg, nlo, nhi)]
    found.sort()
    # exact endpoint roots of a finite domain
    for e in (a, b):
        if e is not None and e != 0 and sign_at(sqf, e) == 0 and (e, e) not in found:
            found.append((e, e))
    found = [bx for bx in found if _box_in_domain(bx, a, b, sqf)]
    found = [_clip(bx, a, b, sqf) for bx in found]
    full = coeffs
    boxes = _finalize(full, sqf, facs, found) if found else []
    if k0 and _in_closed(0, a, b):
        s_right = _side_sign(full, Fraction(0), 1, k0)
        s_left = _side_sign(full, Fraction(0), -1, k0)
        boxes.append(RootBox(Fraction(0), Fraction(0), k0, s_left, s_right))
    boxes.sort(key=lambda r: (r.lo, r.hi))
    return boxes


def _in_closed(x, a, b) -> bool:
    return (a is None or a <= x) and (b is None or x <= b)


def _box_in_domain(box, a, b, c) -> bool:
    lo, hi = box
    if _in_closed(lo, a, b) and _in_closed(hi, a, b):
        return True
    # straddles an endpoint: keep only if the root itself lies inside
    if hi < (a if a is not None else hi) or (b is not None and lo > b):
        return False
    lo2 = lo if a is None else max(lo, a)
    hi2 = hi if b is None else min(hi, b)
    if lo2 == hi2:
        return sign_at(c, lo2) == 0
    s1, s2 = sign_at(c, lo2), sign_at(c, hi2)
    if s1 == 0 or s2 == 0:
        return False  # exact endpoint roots are added separately
    return s1 != s2


def _clip(box, a, b, c):
    lo, hi = box
    if a is not None and lo < a:
        lo = a
    if b is not None and hi > b:
        hi = b
    return (lo, hi)


# ---------------------------------------------------------------------------
# refinement and smallest root
# ---------------------------------------------------------------------------


def refine_root(box: RootBox, p: IntPoly, width, relative: bool = False) -> RootBox:
    """Shrink an isolating box to ``hi - lo <= width`` (``<= width * |root|`` if relative)."""
    width = Fraction(width)
    if box.is_exact:
        return box
    coeffs = p.coeffs if p.scale > 0 else tuple(-v for v in p.coeffs)
    core, _ = _strip_zero(coeffs)
    facs = _sqf_list(core)
    f = next((g for g, m in facs if m == box.multiplicity and len(g) > 1 and _has_root(g, box.lo, box.hi)), None)
    if f is None:
        f = _sqf_part(core)
    lo, hi = box.lo, box.hi
    s_lo = sign_at(f, lo)

    def small_enough():
        if relative:
            mag = min(abs(lo), abs(hi)) if lo * hi > 0 else Fraction(0)
            return hi - lo <= width * mag
        return hi - lo <= width

    while not small_enough():
        if lo > 0 or hi < 0:
            m = _split_point(f, abs(lo) if lo > 0 else abs(hi), abs(hi) if lo > 0 else abs(lo))
            m = m if lo > 0 else -m
        else:
            m = (lo + hi) / 2
        s = sign_at(f, m)
        if s == 0:
            lo = hi = m
            break
        if s == s_lo:
            lo = m
        else:
            hi = m
    return RootBox(lo, hi, box.multiplicity, box.sign_left, box.sign_right)


def smallest_abs_root(p: IntPoly) -> Optional[RootBox]:
    """Real root of minimal absolute value; ties resolve to the negative root."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    coeffs = p.coeffs if p.scale > 0 else tuple(-v for v in p.coeffs)
    core, k0 = _strip_zero(coeffs)
    if k0:
        return RootBox(Fraction(0), Fraction(0), k0, _side_sign(coeffs, Fraction(0), -1, k0), _side_sign(coeffs, Fraction(0), 1, k0))
    if len(core) == 1:
        return None
    facs = _sqf_list(core)
    sqf = _sqf_part(core)
    neg = tuple(v if i % 2 == 0 else -v for i, v in enumerate(sqf))
    Lb, Ub = _root_bounds(sqf)
    sides = {1: sqf, -1: neg}
    # heap entries: (lo, side, hi, known_one); side -1 sorts first so negative wins ties
    heap = [(Lb, -1, Ub, False), (Lb, 1, Ub, False)]
    mirrored = None
    while heap:
        lo, side, hi, one = heapq.heappop(heap)
        c = sides[side]
        if not one:
            v = descartes_count(c, lo, hi)
            if v == 0:
                continue
            one = v == 1
        if one and (not heap or hi <= heap[0][0] or lo == hi):
            return _oriented_box(coeffs, sqf, facs, lo, hi, side)
        if one and heap and heap[0][0] < hi:
            rival = heap[0]
            if hi - lo <= lo * Fraction(1, 2**40) and rival[2] - rival[0] <= lo * Fraction(1, 2**40) and rival[1] != side:
                if mirrored is None:
                    mirrored = _mirror_gcd(sqf)
                if mirrored and _tie(mirrored, max(lo, rival[0]), min(hi, rival[2]), c, sides[-side], rival):
                    return _oriented_box(coeffs, sqf, facs, *_pick_negative(lo, hi, side, rival))
        m = _split_point(c, lo, hi)
        if sign_at(c, m) == 0:
            heapq.heappush(heap, (m, side, m, True))
        heapq.heappush(heap, (lo, side, m, False))
        heapq.heappush(heap, (m, side, hi, False))
    return None


def _oriented_box(coeffs, sqf, facs, lo, hi, side) -> RootBox:
    if side < 0:
        lo, hi = -hi, -lo
    box = _finalize(coeffs, sqf, facs, [(lo, hi)])[0]
    return box


def _mirror_gcd(c) -> Optional[tuple[int, ...]]:
    from sympy.polys.domains import ZZ
    from sympy.polys.euclidtools import dup_gcd

    neg = [v if i % 2 == 0 else -v for i, v in enumerate(c)]
    g = dup_gcd([ZZ(a) for a in reversed(c)], [ZZ(a) for a in reversed(neg)], ZZ)
    g = tuple(int(a) for a in reversed(g))
    return g if len(g) > 1 else ()


def _tie(g, lo, hi, c, c_other, rival) -> bool:
    """Whether the two candidate magnitudes share a root of ``gcd(p(x), p(-x))``."""
    if lo > hi:
        return False
    g = _sqf_part(g)
    if lo == hi:
        return sign_at(g, lo) == 0
    if sign_at(g, lo) == 0 or sign_at(g, hi) == 0:
        return True
    return descartes_count(g, lo, hi) == 1


def _pick_negative(lo, hi, side, rival):
    if side < 0:
        return lo, hi, -1
    return rival[0], rival[2], -1
