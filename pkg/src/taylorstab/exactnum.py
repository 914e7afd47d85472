"""Exact rationals and outward-rounded dyadic interval arithmetic.

``BigRat`` is :class:`fractions.Fraction`.  :class:`DyadicInterval` keeps both
endpoints as binary floating-point numbers (mantissa * 2**exponent) and rounds
every operation outward, so the exact result of a computation on exact inputs
is always contained in the returned interval.  The low-level rounding is done
by mpmath's ``libmpf``/``libmpi`` primitives.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Union

from mpmath.libmp import libmpf, libmpi

BigRat = Fraction

DEFAULT_PREC = 64
MAX_PREC = int(os.environ.get("TAYLORSTAB_MAX_PREC", "8192"))

_FLOOR = libmpf.round_floor
_CEIL = libmpf.round_ceiling


class DomainError(ValueError):
    """A function was evaluated wholly outside its domain."""


class Indeterminate(ArithmeticError):
    """Two overlapping intervals were compared; refine and retry."""


class PrecisionExhausted(ArithmeticError):
    """A decision could not be made at the maximum configured precision."""


Number = Union[int, Fraction, "DyadicInterval"]


def set_max_precision(bits: int) -> int:
    """Set the precision cap used by adaptive evaluation; returns the old cap."""
    global MAX_PREC
    if bits < 64:
        raise ValueError("precision cap must be at least 64 bits")
    old, MAX_PREC = MAX_PREC, int(bits)
    return old


def max_precision() -> int:
    return MAX_PREC


def _mpf_to_fraction(v) -> Fraction:
    sign, man, exp, bc = v
    if not man:
        if v == libmpf.fzero:
            return Fraction(0)
        raise DomainError("non-finite interval endpoint")
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _rat_down(q: Fraction, prec: int):
    return libmpf.from_rational(q.numerator, q.denominator, prec, _FLOOR)


def _rat_up(q: Fraction, prec: int):
    return libmpf.from_rational(q.numerator, q.denominator, prec, _CEIL)


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


class DyadicInterval:
    """Closed interval ``[lo, hi]`` with dyadic endpoints.

    Instances are immutable.  Binary operations run at the larger of the two
    operand precisions.
    """

    __slots__ = ("_v", "prec")

    def __init__(self, lo, hi=None, prec: int = DEFAULT_PREC):
        if hi is None:
            hi = lo
        self.prec = int(prec)
        self._v = (self._endpoint(lo, prec, _FLOOR), self._endpoint(hi, prec, _CEIL))
        if libmpf.mpf_gt(self._v[0], self._v[1]):
            raise ValueError(f"empty interval [{lo}, {hi}]")

    @staticmethod
    def _endpoint(x, prec, rnd):
        if isinstance(x, DyadicInterval):
            return x._v[0] if rnd is _FLOOR else x._v[1]
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return libmpf.from_int(x, prec, rnd)
        if isinstance(x, Rational):
            q = Fraction(x)
            return libmpf.from_rational(q.numerator, q.denominator, prec, rnd)
        if isinstance(x, float):
            return libmpf.from_float(x, prec, rnd)
        if isinstance(x, str):
            return _endpoint_from_str(x, prec, rnd)
        if isinstance(x, tuple):
            return libmpf.normalize(x[0], x[1], x[2], x[3], prec, rnd) if x[1] else x
        raise TypeError(f"cannot build an interval endpoint from {type(x).__name__}")

    @classmethod
    def _raw(cls, v, prec: int) -> "DyadicInterval":
        obj = cls.__new__(cls)
        obj._v = v
        obj.prec = prec
        return obj

    # -- accessors -------------------------------------------------------
    @property
    def lo(self) -> Fraction:
        return _mpf_to_fraction(self._v[0])

    @property
    def hi(self) -> Fraction:
        return _mpf_to_fraction(self._v[1])

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def bounds(self) -> tuple[float, float]:
        """Outward float bounds."""
        return (libmpf.to_float(self._v[0], rnd=_FLOOR), libmpf.to_float(self._v[1], rnd=_CEIL))

    def is_point(self) -> bool:
        return self._v[0] == self._v[1]

    def contains(self, x) -> bool:
        if isinstance(x, DyadicInterval):
            return libmpf.mpf_le(self._v[0], x._v[0]) and libmpf.mpf_ge(self._v[1], x._v[1])
        q = Fraction(x)
        return self.lo <= q <= self.hi

    def subset_of(self, other: "DyadicInterval") -> bool:
        return other.contains(self)

    def at_prec(self, prec: int) -> "DyadicInterval":
        return DyadicInterval._raw(
            (libmpf.mpf_pos(self._v[0], prec, _FLOOR), libmpf.mpf_pos(self._v[1], prec, _CEIL)), prec
        )

    def __repr__(self) -> str:
        a, b = self.bounds()
        return f"DyadicInterval([{a!r}, {b!r}], prec={self.prec})"

    def to_str(self, digits: int = 15) -> str:
        return libmpi.mpi_to_str(self._v, digits)

    def __hash__(self):
        return hash(self._v)

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "DyadicInterval":
        if isinstance(other, DyadicInterval):
            return other
        return DyadicInterval(other, prec=self.prec)

    def _bin(self, other, fn) -> "DyadicInterval":
        other = self._coerce(other)
        prec = max(self.prec, other.prec)
        return DyadicInterval._raw(fn(self._v, other._v, prec), prec)

    def __add__(self, other):
        return self._bin(other, libmpi.mpi_add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._bin(other, libmpi.mpi_sub)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return self._bin(other, libmpi.mpi_mul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if libmpf.mpf_le(other._v[0], libmpf.fzero) and libmpf.mpf_ge(other._v[1], libmpf.fzero):
            raise DomainError("division by an interval containing 0")
        return self._bin(other, libmpi.mpi_div)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return DyadicInterval._raw(libmpi.mpi_neg(self._v), self.prec)

    def __pos__(self):
        return self

    def __abs__(self):
        return DyadicInterval._raw(libmpi.mpi_abs(self._v), self.prec)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            return 1 / (self ** (-k))
        return DyadicInterval._raw(libmpi.mpi_pow_int(self._v, k, self.prec), self.prec)

    def square(self):
        return DyadicInterval._raw(libmpi.mpi_square(self._v, self.prec), self.prec)

    def sqrt(self):
        a, b = self._v
        if libmpf.mpf_lt(b, libmpf.fzero):
            raise DomainError("sqrt of a negative interval")
        if libmpf.mpf_lt(a, libmpf.fzero):
            a = libmpf.fzero
        return DyadicInterval._raw(libmpi.mpi_sqrt((a, b), self.prec), self.prec)

    def exp(self):
        return DyadicInterval._raw(libmpi.mpi_exp(self._v, self.prec), self.prec)

    def log(self):
        if not libmpf.mpf_gt(self._v[0], libmpf.fzero):
            raise DomainError("log of an interval reaching 0 or below")
        return DyadicInterval._raw(libmpi.mpi_log(self._v, self.prec), self.prec)

    def log10(self):
        return self.log() / log_ten(self.prec + 8)

    def sin(self):
        return DyadicInterval._raw(libmpi.mpi_sin(self._v, self.prec), self.prec)

    def cos(self):
        return DyadicInterval._raw(libmpi.mpi_cos(self._v, self.prec), self.prec)

    def cosh(self):
        c, _ = libmpi.mpi_cosh_sinh(self._v, self.prec)
        return DyadicInterval._raw(c, self.prec)

    def atan(self):
        return DyadicInterval._raw(libmpi.mpi_atan(self._v, self.prec), self.prec)

    def hull(self, other) -> "DyadicInterval":
        other = self._coerce(other)
        lo = self._v[0] if libmpf.mpf_le(self._v[0], other._v[0]) else other._v[0]
        hi = self._v[1] if libmpf.mpf_ge(self._v[1], other._v[1]) else other._v[1]
        return DyadicInterval._raw((lo, hi), max(self.prec, other.prec))

    # -- comparisons (raise Indeterminate on overlap) ---------------------
    def __lt__(self, other):
        other = self._coerce(other)
        if libmpf.mpf_lt(self._v[1], other._v[0]):
            return True
        if libmpf.mpf_ge(self._v[0], other._v[1]):
            return False
        raise Indeterminate(f"{self!r} < {other!r} undecided")

    def __le__(self, other):
        other = self._coerce(other)
        if libmpf.mpf_le(self._v[1], other._v[0]):
            return True
        if libmpf.mpf_gt(self._v[0], other._v[1]):
            return False
        raise Indeterminate(f"{self!r} <= {other!r} undecided")

    def __gt__(self, other):
        return self._coerce(other) < self

    def __ge__(self, other):
        return self._coerce(other) <= self

    def __eq__(self, other):
        if not isinstance(other, (DyadicInterval, int, Fraction)):
            return NotImplemented
        other = self._coerce(other)
        return self._v == other._v

    def sign(self) -> int:
        """Certified sign; raises :class:`Indeterminate` if the interval straddles 0."""
        a, b = self._v
        if libmpf.mpf_gt(a, libmpf.fzero):
            return 1
        if libmpf.mpf_lt(b, libmpf.fzero):
            return -1
        if a == libmpf.fzero and b == libmpf.fzero:
            return 0
        raise Indeterminate("sign undecided")


def _endpoint_from_str(s: str, prec: int, rnd):
    return libmpf.from_str(s, prec, rnd)


def interval(lo, hi=None, prec: int = DEFAULT_PREC) -> DyadicInterval:
    return DyadicInterval(lo, hi, prec)


def pi(prec: int = DEFAULT_PREC) -> DyadicInterval:
    return DyadicInterval._raw(libmpi.mpi_pi(prec), prec)


def e(prec: int = DEFAULT_PREC) -> DyadicInterval:
    return DyadicInterval(1, prec=prec).exp()


def log_ten(prec: int = DEFAULT_PREC) -> DyadicInterval:
    return DyadicInterval(10, prec=prec).log()


def inv_e(prec: int = DEFAULT_PREC) -> DyadicInterval:
    return DyadicInterval(-1, prec=prec).exp()


# ---------------------------------------------------------------------------
# Expression DAG with adaptive re-evaluation
# ---------------------------------------------------------------------------

_UNARY = {
    "neg": DyadicInterval.__neg__,
    "sqrt": DyadicInterval.sqrt,
    "exp": DyadicInterval.exp,
    "log": DyadicInterval.log,
    "log10": DyadicInterval.log10,
    "sin": DyadicInterval.sin,
    "cos": DyadicInterval.cos,
    "cosh": DyadicInterval.cosh,
    "abs": DyadicInterval.__abs__,
}
_BINARY = {
    "add": DyadicInterval.__add__,
    "sub": DyadicInterval.__sub__,
    "mul": DyadicInterval.__mul__,
    "div": DyadicInterval.__truediv__,
}
_CONSTANTS: dict[str, Callable[[int], DyadicInterval]] = {"pi": pi, "e": e}


class Expr:
    """Node of an arithmetic expression DAG.

    Leaves are exact rationals or named constants.  Shared sub-expressions
    are evaluated once per call to :func:`interval_eval`.
    """

    __slots__ = ("op", "args")

    def __init__(self, op: str, args: tuple):
        self.op = op
        self.args = args

    def __add__(self, o):
        return Expr("add", (self, lift(o)))

    def __radd__(self, o):
        return Expr("add", (lift(o), self))

    def __sub__(self, o):
        return Expr("sub", (self, lift(o)))

    def __rsub__(self, o):
        return Expr("sub", (lift(o), self))

    def __mul__(self, o):
        return Expr("mul", (self, lift(o)))

    def __rmul__(self, o):
        return Expr("mul", (lift(o), self))

    def __truediv__(self, o):
        return Expr("div", (self, lift(o)))

    def __rtruediv__(self, o):
        return Expr("div", (lift(o), self))

    def __neg__(self):
        return Expr("neg", (self,))

    def __pow__(self, k: int):
        return Expr("pow", (self, int(k)))

    def __repr__(self):
        if self.op == "const":
            return str(self.args[0])
        if self.op == "sym":
            return self.args[0]
        return f"{self.op}({', '.join(map(repr, self.args))})"


def lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Expr("const", (Fraction(x),))
    if isinstance(x, str) and x in _CONSTANTS:
        return Expr("sym", (x,))
    raise TypeError(f"cannot lift {x!r} into an expression")


def const(q) -> Expr:
    return Expr("const", (Fraction(q),))


PI = Expr("sym", ("pi",))
E = Expr("sym", ("e",))


def _unary_builder(name):
    def build(x):
        if isinstance(x, DyadicInterval):
            return _UNARY[name](x)
        return Expr(name, (lift(x),))

    build.__name__ = name
    return build


sqrt = _unary_builder("sqrt")
exp = _unary_builder("exp")
log = _unary_builder("log")
log10 = _unary_builder("log10")
sin = _unary_builder("sin")
cos = _unary_builder("cos")
cosh = _unary_builder("cosh")


def interval_eval(expr: Expr, prec: int = DEFAULT_PREC) -> DyadicInterval:
    """Evaluate ``expr`` with outward rounding at ``prec`` bits."""
    memo: dict[int, DyadicInterval] = {}

    def ev(node: Expr) -> DyadicInterval:
        key = id(node)
        if key in memo:
            return memo[key]
        op, args = node.op, node.args
        if op == "const":
            out = DyadicInterval(args[0], prec=prec)
        elif op == "sym":
            out = _CONSTANTS[args[0]](prec)
        elif op == "pow":
            out = ev(args[0]) ** args[1]
        elif op in _UNARY:
            out = _UNARY[op](ev(args[0]))
        elif op in _BINARY:
            out = _BINARY[op](ev(args[0]), ev(args[1]))
        else:
            raise ValueError(f"unknown operation {op!r}")
        memo[key] = out
        return out

    return ev(expr)


def eval_to_width(expr: Expr, width, start_prec: int = DEFAULT_PREC, max_prec: int | None = None) -> DyadicInterval:
    """Re-evaluate at doubling precision until the enclosure is narrower than ``width``."""
    cap = max_prec or MAX_PREC
    width = Fraction(width)
    prec = start_prec
    while True:
        out = interval_eval(expr, prec)
        if out.width <= width:
            return out
        if prec >= cap:
            raise PrecisionExhausted(f"width {float(out.width):.3g} > {float(width):.3g} at {prec} bits")
        prec = min(2 * prec, cap)


def decide(predicate: Callable[[int], bool], start_prec: int = DEFAULT_PREC, max_prec: int | None = None) -> bool:
    """Run ``predicate(prec)`` at doubling precision until it stops raising Indeterminate."""
    cap = max_prec or MAX_PREC
    prec = start_prec
    while True:
        try:
            return predicate(prec)
        except Indeterminate:
            if prec >= cap:
                raise PrecisionExhausted(f"undecided at {prec} bits") from None
            prec = min(2 * prec, cap)


# ---------------------------------------------------------------------------
# Lambert W (principal branch)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WValue:
    argument: DyadicInterval
    value: DyadicInterval


def _w_guess(x: float) -> float:
    if x < -0.32:
        p = math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0)))
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    if x < 3.0:
        return math.log1p(x) * (1.0 - math.log1p(math.log1p(x)) / (2.0 + math.log1p(x)))
    lx = math.log(x)
    return lx - math.log(lx)


def _halley(x: Fraction, prec: int) -> Fraction:
    """High-precision Halley iteration for w*exp(w) = x, returned as a dyadic rational."""
    from mpmath import mp, mpf

    with mp.workprec(prec + 20):
        xm = mpf(x.numerator) / x.denominator
        w = mpf(_w_guess(float(x)))
        if w < -1:
            w = mpf(-1)
        tol = mpf(2) ** (-prec - 10)
        for _ in range(200):
            ew = mp.exp(w)
            f = w * ew - xm
            wp1 = w + 1
            if wp1 == 0:
                break
            denom = ew * wp1 - (w + 2) * f / (2 * wp1)
            step = f / denom
            w_new = w - step
            if w_new < -1:
                w_new = (w - 1) / 2
            if abs(w_new - w) <= tol * max(1, abs(w_new)):
                w = w_new
                break
            w = w_new
        man, exp_ = w.man_exp
        return Fraction(man) * (Fraction(2) ** exp_) if man else Fraction(0)


def _w_bracket(x: Fraction, prec: int, upper: bool) -> Fraction:
    """Certified lower (or upper) bound on W(x) for an exact rational x >= -1/e."""
    if x == 0:
        return Fraction(0)
    work = 2 * prec + 40
    w = _halley(x, work)
    scale = max(Fraction(1), abs(w))
    step = scale * Fraction(1, 2 ** (prec + 2))
    xi = DyadicInterval(x, prec=work)
    for _ in range(4 * prec + 200):
        cand = w + step if upper else w - step
        if not upper and cand <= -1:
            return Fraction(-1)
        ci = DyadicInterval(cand, prec=work)
        val = ci * ci.exp() - xi
        try:
            s = val.sign()
        except Indeterminate:
            s = 0
        if (upper and s > 0) or (not upper and s < 0):
            return cand
        step *= 2
    raise PrecisionExhausted("could not bracket Lambert W")


def lambert_w(x, prec: int = DEFAULT_PREC) -> WValue:
    """Principal-branch Lambert W enclosure of an interval (or exact) argument."""
    if not isinstance(x, DyadicInterval):
        x = DyadicInterval(x, prec=prec)
    work = prec + 16
    minus_inv_e = -inv_e(work)
    if _decided_lt(x, minus_inv_e):
        raise DomainError("Lambert W argument below -1/e")
    a, b = x.lo, x.hi
    lo_arg_touches = not _decided_lt(minus_inv_e, DyadicInterval(a, prec=work))
    if lo_arg_touches:
        w_lo = Fraction(-1)
    else:
        w_lo = _w_bracket(a, prec, upper=False)
    w_hi = _w_bracket(b, prec, upper=True) if b != 0 else Fraction(0)
    if a == 0:
        w_lo = Fraction(0)
    return WValue(x, DyadicInterval(w_lo, w_hi, prec=max(prec, x.prec)))


def _decided_lt(a: DyadicInterval, b: DyadicInterval) -> bool:
    try:
        return a < b
    except Indeterminate:
        return False


# ---------------------------------------------------------------------------
# Factorial bounds
# ---------------------------------------------------------------------------


def factorial_bounds_check(n: int, max_prec: int | None = None) -> bool:
    """Certify (n/e)^n sqrt(2 pi n) < n! <= e (n/e)^n sqrt(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    fact = math.factorial(n)

    def check(prec: int) -> bool:
        nn = DyadicInterval(n, prec=prec)
        power = DyadicInterval(n**n, prec=prec)
        lower = power * DyadicInterval(-n, prec=prec).exp() * (2 * pi(prec) * nn).sqrt()
        # e * (n/e)^n * sqrt(n) == n^n * e^(1-n) * sqrt(n); exact at n = 1
        upper = power * DyadicInterval(1 - n, prec=prec).exp() * nn.sqrt()
        f = DyadicInterval(fact, prec=prec)
        return (lower < f) and (f <= upper)

    return decide(check, max_prec=max_prec)
