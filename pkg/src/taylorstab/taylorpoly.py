"""Exact polynomial families built from partial sums of the exponential.

Univariate polynomials are stored densely as integer coefficients times one
rational scale factor (:class:`IntPoly`).  The bivariate squared-modulus
polynomial ``G_n(x, y) = |sum_k (x+iy)^k/k!|^2 - 1`` is a :class:`RatPoly2`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Optional, Sequence

from .exactnum import DomainError, DyadicInterval, DEFAULT_PREC

__all__ = [
    "IntPoly",
    "RatPoly2",
    "ComplexPoint",
    "partial_sum",
    "scaled_partial_sum",
    "t_n_eval",
    "tn_ode_residual",
    "e_polynomial",
    "e_polynomial_bruteforce",
    "f_m_polynomial",
    "membership_poly",
    "ray_restrict",
    "ray_poly",
    "line_poly",
    "ray_direction",
]


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


@dataclass(frozen=True)
class IntPoly:
    """``scale * sum(coeffs[k] * z**k)`` with integer ``coeffs`` (ascending)."""

    coeffs: tuple[int, ...]
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        c = tuple(int(v) for v in self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale == 0:
            raise ValueError("scale must be nonzero")

    @classmethod
    def from_fractions(cls, values: Iterable) -> "IntPoly":
        qs = [Fraction(v) for v in values]
        if not any(qs):
            return cls((), Fraction(1))
        den = reduce(_lcm, (q.denominator for q in qs), 1)
        ints = [q.numerator * (den // q.denominator) for q in qs]
        g = reduce(math.gcd, ints, 0)
        return cls(tuple(v // g for v in ints), Fraction(g, den))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def fractions(self) -> list[Fraction]:
        return [self.scale * c for c in self.coeffs]

    def __eq__(self, other):
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.fractions() == other.fractions()

    def __hash__(self):
        return hash(tuple(self.fractions()))

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc * self.scale

    def sign_at(self, x) -> int:
        """Exact sign of the polynomial at a rational point."""
        x = Fraction(x)
        p, q = x.numerator, x.denominator
        acc = 0
        d = self.degree
        # homogenised Horner: q^d p(x) stays integral
        qk = 1
        for c in reversed(self.coeffs):
            acc = acc * p + c * qk
            qk *= q
        s = (acc > 0) - (acc < 0)
        return s if self.scale > 0 else -s

    def eval_interval(self, x: DyadicInterval) -> DyadicInterval:
        acc = DyadicInterval(0, prec=x.prec)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc * DyadicInterval(self.scale, prec=x.prec)

    def eval_complex(self, z: "ComplexPoint") -> "ComplexPoint":
        acc = ComplexPoint.exact(0, 0, z.prec)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc * self.scale

    def derivative(self) -> "IntPoly":
        if self.degree < 1:
            return IntPoly((), Fraction(1))
        return IntPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k), self.scale)

    def _binary(self, other: "IntPoly", op) -> "IntPoly":
        a, b = self.fractions(), other.fractions()
        n = max(len(a), len(b))
        a += [Fraction(0)] * (n - len(a))
        b += [Fraction(0)] * (n - len(b))
        return IntPoly.from_fractions(op(x, y) for x, y in zip(a, b))

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return IntPoly((), Fraction(1))
            return IntPoly(self.coeffs, self.scale * other)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1) if self.coeffs and other.coeffs else []
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out), self.scale * other.scale)

    __rmul__ = __mul__

    def shift_power(self, k: int) -> "IntPoly":
        """Multiply by z**k."""
        return IntPoly((0,) * k + self.coeffs, self.scale) if self.coeffs else self

    def to_json(self, n: int, family: str) -> dict:
        return {
            "n": n,
            "family": family,
            "coeffs": [[str(q.numerator), str(q.denominator)] for q in self.fractions()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IntPoly":
        return cls.from_fractions(Fraction(int(a), int(b)) for a, b in data["coeffs"])


@dataclass(frozen=True)
class RatPoly2:
    """Bivariate rational polynomial ``sum a[i, j] x^i y^j``."""

    coeffs: dict = field(default_factory=dict)

    def __call__(self, x, y) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        return sum((a * x**i * y**j for (i, j), a in self.coeffs.items()), Fraction(0))

    @property
    def total_degree(self) -> int:
        return max((i + j for (i, j) in self.coeffs), default=-1)

    def only_even_y(self) -> bool:
        return all(j % 2 == 0 for (_, j) in self.coeffs)

    def restrict_x0(self) -> IntPoly:
        """The univariate polynomial ``y -> g(0, y)``."""
        deg = max((j for (i, j) in self.coeffs if i == 0), default=0)
        vals = [Fraction(0)] * (deg + 1)
        for (i, j), a in self.coeffs.items():
            if i == 0:
                vals[j] += a
        return IntPoly.from_fractions(vals)

    def to_json(self, n: int) -> dict:
        items = sorted(self.coeffs.items())
        return {
            "n": n,
            "family": "G",
            "monomials": [[i, j] for (i, j), _ in items],
            "coeffs": [[str(a.numerator), str(a.denominator)] for _, a in items],
        }


class ComplexPoint:
    """Rectangular complex interval ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re: DyadicInterval, im: DyadicInterval):
        self.re = re
        self.im = im

    @classmethod
    def exact(cls, re, im=0, prec: int = DEFAULT_PREC) -> "ComplexPoint":
        return cls(DyadicInterval(re, prec=prec), DyadicInterval(im, prec=prec))

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    def _lift(self, o) -> "ComplexPoint":
        if isinstance(o, ComplexPoint):
            return o
        if isinstance(o, DyadicInterval):
            return ComplexPoint(o, DyadicInterval(0, prec=o.prec))
        return ComplexPoint.exact(o, 0, self.prec)

    def __add__(self, o):
        o = self._lift(o)
        return ComplexPoint(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._lift(o)
        return ComplexPoint(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return self._lift(o) - self

    def __neg__(self):
        return ComplexPoint(-self.re, -self.im)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            q = DyadicInterval(o, prec=self.prec)
            return ComplexPoint(self.re * q, self.im * q)
        o = self._lift(o)
        return ComplexPoint(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs2(self) -> DyadicInterval:
        return self.re.square() + self.im.square()

    def abs(self) -> DyadicInterval:
        return self.abs2().sqrt()

    def may_be_zero(self) -> bool:
        return self.re.contains(0) and self.im.contains(0)

    def reciprocal(self) -> "ComplexPoint":
        if self.may_be_zero():
            raise DomainError("reciprocal of a complex interval containing 0")
        d = self.abs2()
        return ComplexPoint(self.re / d, -self.im / d)

    def __truediv__(self, o):
        return self * self._lift(o).reciprocal()

    def __rtruediv__(self, o):
        return self._lift(o) * self.reciprocal()

    def __repr__(self):
        return f"ComplexPoint({self.re!r}, {self.im!r})"


# ---------------------------------------------------------------------------
# Partial sums and T_n
# ---------------------------------------------------------------------------


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


@lru_cache(maxsize=None)
def partial_sum(n: int) -> IntPoly:
    """``sum_{k<=n} z^k/k!`` as ``(1/n!) * sum (n!/k!) z^k``."""
    _check_n(n)
    f = math.factorial(n)
    return IntPoly(tuple(f // math.factorial(k) for k in range(n + 1)), Fraction(1, f))


@lru_cache(maxsize=None)
def scaled_partial_sum(n: int) -> IntPoly:
    """``sum_{k<=n} (n z)^k/k!`` with scale ``1/n!``."""
    _check_n(n)
    f = math.factorial(n)
    return IntPoly(tuple(f // math.factorial(k) * n**k for k in range(n + 1)), Fraction(1, f))


def t_n_eval(n: int, z: ComplexPoint) -> ComplexPoint:
    """Enclosure of ``n!/(nz)^n * P_n(z)``, evaluated as a polynomial in ``1/(nz)``."""
    _check_n(n)
    if z.may_be_zero():
        raise DomainError("T_n is undefined at z = 0")
    u = (z * n).reciprocal()
    acc = ComplexPoint.exact(0, 0, z.prec)
    # T_n = sum_j n!/(n-j)! * u^j
    for j in range(n, -1, -1):
        acc = acc * u + math.factorial(n) // math.factorial(n - j)
    return acc


def tn_ode_residual(n: int) -> IntPoly:
    """Numerator of ``(z-1) T_n - z (1 + T_n'/n)`` after clearing ``n z^n``.

    With ``N(z) = z^n T_n(z)`` this is ``z (n N - N' - n z^n)``; it vanishes
    identically exactly when the ODE identity holds.
    """
    _check_n(n)
    N = scaled_partial_sum(n) * Fraction(math.factorial(n), n**n)
    zn = IntPoly((0,) * n + (1,))
    z = IntPoly((0, 1))
    lhs = (z - IntPoly((1,))) * N * n
    rhs = zn.shift_power(1) * n + z * N.derivative() - N * n
    return lhs - rhs


# ---------------------------------------------------------------------------
# E-polynomials and f_m
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def e_polynomial(n: int) -> IntPoly:
    """``|sum_{k<=n} (iy)^k/k!|^2 - 1`` from the closed-form sums (period 4 in n)."""
    _check_n(n)
    r = n % 4
    vals = [Fraction(0)] * (2 * n + 1)
    fn = math.factorial(n)
    if r in (0, 2):
        sign = -1 if r == 0 else 1
        half = n // 2
        for k in range(1, half + 1):
            term = Fraction((-1) ** (k + 1), math.factorial(2 * k - 1) * (k + half) * fn)
            vals[n + 1 + 2 * k - 1] += sign * term
    else:
        sign = 1 if r == 1 else -1
        half = (n + 1) // 2
        for k in range(0, (n - 1) // 2 + 1):
            term = Fraction((-1) ** k, math.factorial(2 * k) * (k + half) * fn)
            vals[n + 1 + 2 * k] += sign * term
    return IntPoly.from_fractions(vals)


def e_polynomial_bruteforce(n: int) -> IntPoly:
    """Direct expansion of ``|sum (iy)^k/k!|^2 - 1``; the oracle for :func:`e_polynomial`."""
    _check_n(n)
    re = [Fraction(0)] * (n + 1)
    im = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        c = Fraction(1, math.factorial(k))
        # i^k cycles 1, i, -1, -i
        if k % 4 == 0:
            re[k] += c
        elif k % 4 == 1:
            im[k] += c
        elif k % 4 == 2:
            re[k] -= c
        else:
            im[k] -= c
    out = [Fraction(0)] * (2 * n + 1)
    for a in range(n + 1):
        for b in range(n + 1):
            out[a + b] += re[a] * re[b] + im[a] * im[b]
    out[0] -= 1
    return IntPoly.from_fractions(out)


@lru_cache(maxsize=None)
def f_m_polynomial(m: int) -> IntPoly:
    """``-(4m+1)/2 * sum_{k=1}^{2m} (-1)^(k+1) z^(2k-1) / ((2k-1)! (k+2m))``."""
    if not isinstance(m, int) or m < 1:
        raise ValueError("m must be a positive integer")
    vals = [Fraction(0)] * (4 * m)
    for k in range(1, 2 * m + 1):
        vals[2 * k - 1] = Fraction(-(4 * m + 1) * (-1) ** (k + 1), 2 * math.factorial(2 * k - 1) * (k + 2 * m))
    return IntPoly.from_fractions(vals)


# ---------------------------------------------------------------------------
# Membership polynomial and its restrictions
# ---------------------------------------------------------------------------


def _gaussian_terms(n: int) -> tuple[dict, dict]:
    """Integer real/imag parts of ``sum_k (n!/k!) (x+iy)^k`` as ``{(i, j): coeff}``."""
    fn = math.factorial(n)
    re: dict = {}
    im: dict = {}
    for k in range(n + 1):
        ck = fn // math.factorial(k)
        for j in range(k + 1):
            c = ck * math.comb(k, j)
            key = (k - j, j)
            q = j % 4
            if q == 0:
                re[key] = re.get(key, 0) + c
            elif q == 1:
                im[key] = im.get(key, 0) + c
            elif q == 2:
                re[key] = re.get(key, 0) - c
            else:
                im[key] = im.get(key, 0) - c
    return re, im


def _dict_square(a: dict) -> dict:
    items = list(a.items())
    out: dict = {}
    for idx, ((i1, j1), c1) in enumerate(items):
        key = (2 * i1, 2 * j1)
        out[key] = out.get(key, 0) + c1 * c1
        twice = 2 * c1
        for (i2, j2), c2 in items[idx + 1 :]:
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0) + twice * c2
    return out


@lru_cache(maxsize=None)
def membership_poly(n: int, scaled: bool = False) -> RatPoly2:
    """``G_n(x, y) = |sum_{k<=n} (x+iy)^k/k!|^2 - 1``; with ``scaled`` use ``(nx, ny)``."""
    _check_n(n)
    re, im = _gaussian_terms(n)
    sq = _dict_square(re)
    for key, c in _dict_square(im).items():
        sq[key] = sq.get(key, 0) + c
    fn2 = math.factorial(n) ** 2
    sq[(0, 0)] = sq.get((0, 0), 0) - fn2
    out = {}
    for (i, j), c in sq.items():
        if c:
            q = Fraction(c, fn2)
            if scaled:
                q *= n ** (i + j)
            out[(i, j)] = q
    return RatPoly2(out)


def ray_direction(t: Optional[Fraction]) -> tuple[Fraction, Fraction]:
    """``(cos phi, sin phi)`` for tangent half-angle ``t``; ``None`` means ``(-1, 0)``."""
    if t is None:
        return Fraction(-1), Fraction(0)
    t = Fraction(t)
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def ray_restrict(g: RatPoly2, t: Optional[Fraction]) -> IntPoly:
    """``r -> g(r cos phi, r sin phi)`` for the rational direction given by ``t``."""
    c, s = ray_direction(t)
    deg = g.total_degree
    vals = [Fraction(0)] * (deg + 1)
    for (i, j), a in g.coeffs.items():
        vals[i + j] += a * c**i * s**j
    return IntPoly.from_fractions(vals)


def _gauss(q) -> tuple[Fraction, Fraction]:
    if isinstance(q, tuple):
        return Fraction(q[0]), Fraction(q[1])
    if isinstance(q, complex):
        return Fraction(q.real), Fraction(q.imag)
    return Fraction(q), Fraction(0)


def line_poly(n: int, z0, d, scaled: bool = False) -> IntPoly:
    """``t -> G_n(z0 + t*d)`` for Gaussian-rational ``z0`` and ``d``.

    ``z0`` and ``d`` are ``(re, im)`` pairs of rationals.  The result is an
    integer polynomial (times a rational scale) of degree ``2n``.
    """
    _check_n(n)
    a0, b0 = _gauss(z0)
    a1, b1 = _gauss(d)
    if scaled:
        a0, b0, a1, b1 = a0 * n, b0 * n, a1 * n, b1 * n
    M = reduce(_lcm, (a0.denominator, b0.denominator, a1.denominator, b1.denominator), 1)
    # L(t) = M (z0 + d t) has Gaussian-integer coefficients
    l0 = (int(a0 * M), int(b0 * M))
    l1 = (int(a1 * M), int(b1 * M))
    fn = math.factorial(n)
    # Horner: acc = sum_k (n!/k!) M^(n-k) L^k
    acc_re = [1]
    acc_im = [0]
    mpow = 1
    for k in range(n - 1, -1, -1):
        mpow *= M
        new_re = [0] * (len(acc_re) + 1)
        new_im = [0] * (len(acc_re) + 1)
        for j, (ar, ai) in enumerate(zip(acc_re, acc_im)):
            if ar or ai:
                new_re[j] += ar * l0[0] - ai * l0[1]
                new_im[j] += ar * l0[1] + ai * l0[0]
                new_re[j + 1] += ar * l1[0] - ai * l1[1]
                new_im[j + 1] += ar * l1[1] + ai * l1[0]
        new_re[0] += (fn // math.factorial(k)) * mpow
        acc_re, acc_im = new_re, new_im
    out = _int_square(acc_re)
    for j, v in enumerate(_int_square(acc_im)):
        out[j] += v
    out[0] -= (fn * M**n) ** 2
    return IntPoly(tuple(out), Fraction(1, (fn * M**n) ** 2))


def _int_square(a: Sequence[int]) -> list[int]:
    out = [0] * (2 * len(a) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        out[2 * i] += x * x
        tx = 2 * x
        for j in range(i + 1, len(a)):
            if a[j]:
                out[i + j] += tx * a[j]
    return out


def ray_poly(n: int, t: Optional[Fraction], scaled: bool = True) -> IntPoly:
    """Ray restriction of ``G_n`` computed directly (no bivariate expansion)."""
    return line_poly(n, (0, 0), ray_direction(t), scaled=scaled)


def poly_json(poly: IntPoly, n: int, family: str) -> str:
    return json.dumps(poly.to_json(n, family), sort_keys=True)
