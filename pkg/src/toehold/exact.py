"""Exact integer/rational substrate: binomials, powers and binomial tail sums.

``ExactRational`` is :class:`fractions.Fraction`. It already normalizes on
construction, keeps a positive denominator and renders as ``"p/q"`` (or ``"p"``
for integers), which is the canonical text form used in every JSON output.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

ExactRational = Fraction

RationalLike = Union[Fraction, int]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConsistencyError(AssertionError):
    """An internal identity that must hold exactly was violated."""


def as_rational(x: RationalLike | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational: {x!r}") from exc
    raise DomainError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (optionally signed). Decimal or float text is rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise DomainError(f"malformed rational: {text!r}") from None
    if q == 0:
        raise DomainError(f"zero denominator: {text!r}")
    return Fraction(p, q)


def canonical(x: Fraction) -> str:
    return str(Fraction(x))


def binomial(n: int, k: int) -> int:
    """C(n, k) by the multiplicative formula; every intermediate division is exact."""
    if n < 0 or k < 0:
        raise DomainError(f"binomial({n}, {k}): arguments must be nonnegative")
    if k > n:
        raise DomainError(f"binomial({n}, {k}): k exceeds n")
    k = min(k, n - k)
    c = 1
    for i in range(1, k + 1):
        c = c * (n - k + i) // i
    return c


def rational_pow(base: RationalLike, exponent: int) -> Fraction:
    b = as_rational(base)
    if b == 0 and exponent < 0:
        raise DomainError("zero raised to a negative power")
    return b**exponent


def _check_probability(sigma: Fraction) -> None:
    if not 0 <= sigma <= 1:
        raise DomainError(f"probability {sigma} outside [0, 1]")


def tail_binomial_sum(m: int, j0: int, sigma: RationalLike) -> Fraction:
    """Exact ``sum_{k=j0}^{m} C(m,k) sigma^k (1-sigma)^(m-k)``.

    With ``sigma = p/q`` the weights ``C(m,k) p^k (q-p)^(m-k)`` are integers and
    are updated in place from ``k`` to ``k+1``; the single division by ``q^m``
    happens at the end.
    """
    s = as_rational(sigma)
    _check_probability(s)
    if m < 0 or j0 < 0:
        raise DomainError("trial count and threshold must be nonnegative")
    if j0 > m + 1:
        raise DomainError(f"threshold {j0} beyond empty tail at m+1={m + 1}")
    if j0 == m + 1:
        return Fraction(0)
    if j0 == 0:
        return Fraction(1)
    p, q = s.numerator, s.denominator
    r = q - p
    if r == 0:
        # sigma == 1: all mass sits on k == m
        return Fraction(1)
    if p == 0:
        return Fraction(0)
    w = binomial(m, j0) * p**j0 * r ** (m - j0)
    total = w
    for k in range(j0, m):
        w = w * (m - k) * p // ((k + 1) * r)
        total += w
    return Fraction(total, q**m)


def head_binomial_sum(m: int, j1: int, sigma: RationalLike) -> Fraction:
    """Exact ``sum_{k=0}^{j1} C(m,k) sigma^k (1-sigma)^(m-k)``, for ``-1 <= j1 <= m``."""
    s = as_rational(sigma)
    _check_probability(s)
    return 1 - tail_binomial_sum(m, j1 + 1, s)


def binomial_weight(m: int, k: int, sigma: RationalLike) -> Fraction:
    s = as_rational(sigma)
    return binomial(m, k) * s**k * (1 - s) ** (m - k)


def to_decimal(x: RationalLike, digits: int) -> str:
    """Fixed-point rendering with ``digits`` places, rounded half-even from the exact value."""
    if digits < 0:
        raise DomainError("digits must be nonnegative")
    q = round(as_rational(x) * 10**digits)
    sign = "-" if q < 0 else ""
    whole, frac = divmod(abs(q), 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"
