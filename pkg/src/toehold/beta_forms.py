"""Incomplete beta integrals with integer parameters, evaluated exactly.

Every integrand here is a polynomial with rational endpoints, so the integrals
are finite alternating sums of rationals; no quadrature is involved.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from toehold.exact import DomainError, RationalLike, as_rational, binomial, tail_binomial_sum
from toehold.model import _check_n


def _unit(x: RationalLike) -> Fraction:
    v = as_rational(x)
    if not 0 <= v <= 1:
        raise DomainError(f"x = {v} outside [0, 1]")
    return v


def _positive(name: str, v: int) -> None:
    if v < 1:
        raise DomainError(f"{name} must be a positive integer, got {v}")


def incomplete_beta_exact(a: int, b: int, x: RationalLike) -> Fraction:
    """``B_x(a,b) = sum_j C(b-1,j) (-1)^j x^(a+j) / (a+j)``, ascending j."""
    _positive("a", a)
    _positive("b", b)
    xv = _unit(x)
    total = Fraction(0)
    for j in range(b):
        term = Fraction(binomial(b - 1, j)) * xv ** (a + j) / (a + j)
        total += -term if j % 2 else term
    return total


def complete_beta(a: int, b: int) -> Fraction:
    _positive("a", a)
    _positive("b", b)
    return Fraction(factorial(a - 1) * factorial(b - 1), factorial(a + b - 1))


def beta_tail_identity_gap(a: int, b: int, x: RationalLike) -> Fraction:
    """Binomial tail over ``a+b-1`` trials minus ``a C(a+b-1,a) B_x(a,b)``; zero when the identity holds."""
    _positive("a", a)
    _positive("b", b)
    xv = _unit(x)
    m = a + b - 1
    return tail_binomial_sum(m, a, xv) - a * binomial(m, a) * incomplete_beta_exact(a, b, xv)


def symmetric_integral_exact(m: int, x: RationalLike) -> Fraction:
    """``int_0^x (1 - t^2)^m dt`` as ``sum_j C(m,j) (-1)^j x^(2j+1) / (2j+1)``."""
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    xv = _unit(x)
    x2 = xv * xv
    power = xv
    total = Fraction(0)
    for j in range(m + 1):
        term = binomial(m, j) * power / (2 * j + 1)
        total += -term if j % 2 else term
        power *= x2
    return total


def _shared_parts(n: int) -> tuple[Fraction, Fraction]:
    """Return ``C(2n,n) 2^-(2n+1) (1 - 1/(2n+1)^2)^n`` and ``n C(2n,n) 2^-2n int_0^{1/(2n+1)} (1-t^2)^(n-1)``."""
    c = binomial(2 * n, n)
    shrink = (1 - Fraction(1, (2 * n + 1) ** 2)) ** n
    edge = Fraction(c, 2 ** (2 * n + 1)) * shrink
    bulk = Fraction(n * c, 2 ** (2 * n)) * symmetric_integral_exact(n - 1, Fraction(1, 2 * n + 1))
    return edge, bulk


def analytic_price_no_toehold(n: int) -> Fraction:
    _check_n(n)
    edge, bulk = _shared_parts(n)
    return Fraction(1, 2) - edge + bulk


def analytic_takeover_prob_no_toehold(n: int) -> Fraction:
    _check_n(n)
    c = binomial(2 * n, n)
    integral = symmetric_integral_exact(n, Fraction(1, 2 * n + 1))
    return Fraction(1, 2) + Fraction((2 * n + 1) * c, 2 ** (2 * n + 1)) * integral


def analytic_profit(n: int) -> Fraction:
    _check_n(n)
    c = binomial(2 * n, n)
    return Fraction((n + 1) * c, 2 ** (2 * n)) * (1 - Fraction(1, (2 * n + 1) ** 2)) ** n


def analytic_takeover_prob_toehold(n: int) -> Fraction:
    _check_n(n)
    edge, bulk = _shared_parts(n)
    return Fraction(1, 2) + edge + bulk


def analytic_price_toehold(n: int) -> Fraction:
    _check_n(n)
    _, bulk = _shared_parts(n)
    return Fraction(1, 2) + bulk
