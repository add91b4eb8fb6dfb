"""Outward-rounded interval arithmetic on MPFR (via gmpy2).

Each endpoint is produced by a single correctly rounded MPFR operation in the
matching direction (``RoundDown`` for ``lo``, ``RoundUp`` for ``hi``), so the
true value of the enclosed expression always lies in ``[lo, hi]``.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import gmpy2
from gmpy2 import mpfr, mpq

from toehold.exact import DomainError, as_rational

MIN_PRECISION = 16

# 64 significant digits, for the startup self-check of the constant enclosures.
PI_REFERENCE = "3.141592653589793238462643383279502884197169399375105820974944592"
E_REFERENCE = "2.718281828459045235360287471352662497757247093699959574966967628"


@contextmanager
def _rounding(precision: int, direction: int) -> Iterator[None]:
    with gmpy2.context(gmpy2.get_context(), precision=precision, round=direction):
        yield


def _down(precision: int):
    return _rounding(precision, gmpy2.RoundDown)


def _up(precision: int):
    return _rounding(precision, gmpy2.RoundUp)


def _check_precision(precision_bits: int) -> None:
    if precision_bits < MIN_PRECISION:
        raise DomainError(f"precision_bits must be >= {MIN_PRECISION}, got {precision_bits}")


def _mpq(r: Fraction) -> mpq:
    return mpq(r.numerator, r.denominator)


@dataclass(frozen=True)
class Interval:
    lo: mpfr
    hi: mpfr
    precision_bits: int

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi_exact - self.lo_exact

    @property
    def lo_exact(self) -> Fraction:
        return Fraction(*map(int, self.lo.as_integer_ratio()))

    @property
    def hi_exact(self) -> Fraction:
        return Fraction(*map(int, self.hi.as_integer_ratio()))

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: Union[Fraction, int]) -> bool:
        v = _mpq(as_rational(value))
        return self.lo <= v <= self.hi

    def encloses(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def rounded(self, precision_bits: int) -> "Interval":
        """Re-round outward to a (typically lower) precision."""
        with _down(precision_bits):
            lo = mpfr(self.lo)
        with _up(precision_bits):
            hi = mpfr(self.hi)
        return Interval(lo, hi, precision_bits)

    def _coerce(self, other: "IntervalLike") -> "Interval":
        if isinstance(other, Interval):
            return other
        return interval_from_rational(as_rational(other), self.precision_bits)

    def __neg__(self) -> "Interval":
        # gmpy2 rounds even unary minus to the ambient precision
        with _down(self.precision_bits):
            lo = -self.hi
            hi = -self.lo
        return Interval(lo, hi, self.precision_bits)

    def __add__(self, other: "IntervalLike") -> "Interval":
        o = self._coerce(other)
        p = max(self.precision_bits, o.precision_bits)
        with _down(p):
            lo = self.lo + o.lo
        with _up(p):
            hi = self.hi + o.hi
        return Interval(lo, hi, p)

    __radd__ = __add__

    def __sub__(self, other: "IntervalLike") -> "Interval":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "IntervalLike") -> "Interval":
        return self._coerce(other) + (-self)

    def __mul__(self, other: "IntervalLike") -> "Interval":
        o = self._coerce(other)
        p = max(self.precision_bits, o.precision_bits)
        pairs = [(self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi)]
        with _down(p):
            lo = min(a * b for a, b in pairs)
        with _up(p):
            hi = max(a * b for a, b in pairs)
        return Interval(lo, hi, p)

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise DomainError("reciprocal of an interval containing zero")
        p = self.precision_bits
        with _down(p):
            lo = 1 / self.hi
        with _up(p):
            hi = 1 / self.lo
        return Interval(lo, hi, p)

    def __truediv__(self, other: "IntervalLike") -> "Interval":
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other: "IntervalLike") -> "Interval":
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, k: int) -> "Interval":
        if k < 0:
            return (self**-k).reciprocal()
        # even powers of a sign-straddling interval need the |x| treatment
        if k % 2 == 0 and self.lo < 0 < self.hi:
            with _up(self.precision_bits):
                top = max(abs(self.lo), self.hi) ** k
            return Interval(mpfr(0), top, self.precision_bits)
        result = interval_from_rational(Fraction(1), self.precision_bits)
        for _ in range(k):
            result = result * self
        return result

    def __repr__(self) -> str:
        return f"Interval([{self.lo}, {self.hi}], {self.precision_bits} bits)"


IntervalLike = Union[Interval, Fraction, int]


def interval_from_rational(r: Union[Fraction, int], precision_bits: int) -> Interval:
    _check_precision(precision_bits)
    q = _mpq(as_rational(r))
    with _down(precision_bits):
        lo = mpfr(q)
    with _up(precision_bits):
        hi = mpfr(q)
    return Interval(lo, hi, precision_bits)


def hull(*items: Interval) -> Interval:
    p = max(i.precision_bits for i in items)
    return Interval(min(i.lo for i in items), max(i.hi for i in items), p)


def interval_min(*items: Interval) -> Interval:
    p = max(i.precision_bits for i in items)
    return Interval(min(i.lo for i in items), min(i.hi for i in items), p)


def pi_interval(precision_bits: int) -> Interval:
    _check_precision(precision_bits)
    with _down(precision_bits):
        lo = gmpy2.const_pi()
    with _up(precision_bits):
        hi = gmpy2.const_pi()
    return Interval(lo, hi, precision_bits)


def e_interval(precision_bits: int) -> Interval:
    _check_precision(precision_bits)
    with _down(precision_bits):
        lo = gmpy2.exp(mpfr(1))
    with _up(precision_bits):
        hi = gmpy2.exp(mpfr(1))
    return Interval(lo, hi, precision_bits)


def _as_interval(x: IntervalLike, precision_bits: int) -> Interval:
    if isinstance(x, Interval):
        return x
    return interval_from_rational(as_rational(x), precision_bits)


def ln_interval(x: IntervalLike, precision_bits: int) -> Interval:
    """Enclosure of ``ln x``; ``log`` is monotone so endpoints map to endpoints."""
    _check_precision(precision_bits)
    xi = _as_interval(x, precision_bits)
    if xi.lo <= 0:
        raise DomainError("logarithm of a nonpositive argument")
    with _down(precision_bits):
        lo = gmpy2.log(xi.lo)
    with _up(precision_bits):
        hi = gmpy2.log(xi.hi)
    return Interval(lo, hi, precision_bits)


def exp_interval(x: IntervalLike, precision_bits: int) -> Interval:
    _check_precision(precision_bits)
    xi = _as_interval(x, precision_bits)
    with _down(precision_bits):
        lo = gmpy2.exp(xi.lo)
    with _up(precision_bits):
        hi = gmpy2.exp(xi.hi)
    return Interval(lo, hi, precision_bits)


def sqrt_interval(x: IntervalLike, precision_bits: int) -> Interval:
    _check_precision(precision_bits)
    xi = _as_interval(x, precision_bits)
    if xi.lo < 0:
        raise DomainError("square root of a negative argument")
    with _down(precision_bits):
        lo = gmpy2.sqrt(xi.lo)
    with _up(precision_bits):
        hi = gmpy2.sqrt(xi.hi)
    return Interval(lo, hi, precision_bits)


def integer_interval(k: int, precision_bits: int) -> Interval:
    return interval_from_rational(Fraction(k), precision_bits)


def _log_factorial(n: int, precision_bits: int) -> Interval:
    # one directed log of the exact integer n!; no summation error to accumulate
    f = 1
    for k in range(2, n + 1):
        f *= k
    return ln_interval(integer_interval(f, precision_bits), precision_bits)


def stirling_remainder(n: int, precision_bits: int) -> Interval:
    """Enclosure of ``r_n = ln(n!) - ln(2 pi n)/2 - n ln n + n``.

    Evaluated with enough guard bits to absorb the cancellation between
    ``ln(n!)`` and ``n ln n`` (both of order ``n ln n``), then rounded out to
    ``precision_bits``.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    _check_precision(precision_bits)
    w = precision_bits + 2 * n.bit_length() + 32
    log_fact = _log_factorial(n, w)
    half_log = ln_interval(pi_interval(w) * (2 * n), w) * Fraction(1, 2)
    n_log_n = ln_interval(Fraction(n), w) * n
    r = log_fact - half_log - n_log_n + n
    return r.rounded(precision_bits)


def central_binomial_normalized(n: int, precision_bits: int) -> Interval:
    """Enclosure of ``C(2n,n) sqrt(pi n) / 4^n``."""
    from toehold.exact import binomial

    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    _check_precision(precision_bits)
    w = precision_bits + 16
    ratio = interval_from_rational(Fraction(binomial(2 * n, n), 4**n), w)
    root = sqrt_interval(pi_interval(w) * n, w)
    return (ratio * root).rounded(precision_bits)


def inverse_sqrt_pi_n(n: int, precision_bits: int) -> Interval:
    """Enclosure of ``1 / sqrt(pi n)``."""
    return sqrt_interval(pi_interval(precision_bits) * n, precision_bits).reciprocal()


def _self_check() -> None:
    for name, ref, make in (("pi", PI_REFERENCE, pi_interval), ("e", E_REFERENCE, e_interval)):
        # 64 digits: the reference is within 10^-63 of the true constant
        r = Fraction(ref)
        slack = Fraction(1, 10**63)
        enc = make(256)
        if not (enc.lo_exact <= r + slack and r - slack <= enc.hi_exact):
            raise RuntimeError(f"{name} enclosure disagrees with its reference digits")


_self_check()
