"""Equilibrium parameters of the no-toehold and toehold tender-offer games.

A firm has ``2n+1`` shareholders. Without a toehold the bidder needs ``n+1``
tendered shares; after buying one share at the no-toehold price it needs
``n`` of the remaining ``2n``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from toehold.exact import (
    ConsistencyError,
    DomainError,
    RationalLike,
    as_rational,
    binomial,
    canonical,
    tail_binomial_sum,
)


class Strategy(enum.Enum):
    NO_TOEHOLD = 0
    TOEHOLD = 1

    @property
    def label(self) -> str:
        return "no_toehold" if self is Strategy.NO_TOEHOLD else "toehold"


def _check_n(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")


def _interior(sigma: RationalLike) -> Fraction:
    s = as_rational(sigma)
    if not 0 < s < 1:
        raise DomainError(f"sigma must lie strictly inside (0, 1), got {s}")
    return s


@lru_cache(maxsize=None)
def equilibrium_sigma(n: int) -> Fraction:
    _check_n(n)
    return Fraction(n + 1, 2 * n + 1)


@lru_cache(maxsize=None)
def price_no_toehold(n: int) -> Fraction:
    _check_n(n)
    return tail_binomial_sum(2 * n, n + 1, equilibrium_sigma(n))


@lru_cache(maxsize=None)
def takeover_prob_no_toehold(n: int) -> Fraction:
    _check_n(n)
    return tail_binomial_sum(2 * n + 1, n + 1, equilibrium_sigma(n))


@lru_cache(maxsize=None)
def price_toehold(n: int) -> Fraction:
    _check_n(n)
    return tail_binomial_sum(2 * n - 1, n, equilibrium_sigma(n))


@lru_cache(maxsize=None)
def takeover_prob_toehold(n: int) -> Fraction:
    _check_n(n)
    return tail_binomial_sum(2 * n, n, equilibrium_sigma(n))


@lru_cache(maxsize=None)
def expected_profit(n: int) -> Fraction:
    """Closed form ``C(2n,n) (n+1)^(n+1) n^n / (2n+1)^(2n)``, shared by both strategies."""
    _check_n(n)
    return Fraction(binomial(2 * n, n) * (n + 1) ** (n + 1) * n**n, (2 * n + 1) ** (2 * n))


def _central_weight(n: int, sigma: Fraction) -> Fraction:
    return binomial(2 * n, n) * sigma**n * (1 - sigma) ** n


@dataclass(frozen=True)
class ModelPoint:
    n: int
    sigma: Fraction
    price_no_toehold: Fraction
    takeover_prob_no_toehold: Fraction
    price_toehold: Fraction
    takeover_prob_toehold: Fraction
    expected_profit: Fraction

    @property
    def p1_minus_p0(self) -> Fraction:
        return self.takeover_prob_toehold - self.takeover_prob_no_toehold

    @property
    def x1_minus_x0(self) -> Fraction:
        return self.price_toehold - self.price_no_toehold

    def check(self) -> None:
        n, s = self.n, self.sigma
        x0, p0 = self.price_no_toehold, self.takeover_prob_no_toehold
        x1, p1 = self.price_toehold, self.takeover_prob_toehold
        half = Fraction(1, 2)
        failures = []
        if s != Fraction(n + 1, 2 * n + 1):
            failures.append("sigma != (n+1)/(2n+1)")
        if not 0 < x0 < x1 < 1:
            failures.append("0 < X0 < X1 < 1")
        if not half < p0 < p1 < 1:
            failures.append("1/2 < P0 < P1 < 1")
        if p1 != x0 + _central_weight(n, s):
            failures.append("P1 == X0 + C(2n,n) s^n (1-s)^n")
        if failures:
            raise ConsistencyError(f"model point n={n} violates: {', '.join(failures)}")

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "sigma": canonical(self.sigma),
            "x0": canonical(self.price_no_toehold),
            "p0": canonical(self.takeover_prob_no_toehold),
            "x1": canonical(self.price_toehold),
            "p1": canonical(self.takeover_prob_toehold),
            "profit": canonical(self.expected_profit),
        }


def model_point(n: int) -> ModelPoint:
    _check_n(n)
    point = ModelPoint(
        n=n,
        sigma=equilibrium_sigma(n),
        price_no_toehold=price_no_toehold(n),
        takeover_prob_no_toehold=takeover_prob_no_toehold(n),
        price_toehold=price_toehold(n),
        takeover_prob_toehold=takeover_prob_toehold(n),
        expected_profit=expected_profit(n),
    )
    point.check()
    return point


def indifference_price(n: int, strategy: Strategy, sigma: RationalLike) -> Fraction:
    """Price that leaves a shareholder indifferent when the others tender with ``sigma``."""
    _check_n(n)
    s = _interior(sigma)
    if strategy is Strategy.NO_TOEHOLD:
        return tail_binomial_sum(2 * n, n + 1, s)
    return tail_binomial_sum(2 * n - 1, n, s)


def indifference_gap(n: int, strategy: Strategy, price: RationalLike, sigma: RationalLike) -> Fraction:
    return as_rational(price) - indifference_price(n, strategy, sigma)


def profit_curve(n: int, sigma: RationalLike, strategy: Strategy) -> Fraction:
    """Expected bidder profit when shareholders tender with ``sigma`` at the indifference price.

    The toehold branch charges the toehold at the fixed no-toehold equilibrium
    price, independent of ``sigma``.
    """
    _check_n(n)
    s = _interior(sigma)
    if strategy is Strategy.NO_TOEHOLD:
        return (2 * n + 1) * binomial(2 * n, n) * s ** (n + 1) * (1 - s) ** n
    return -price_no_toehold(n) + tail_binomial_sum(2 * n, n, s) + n * _central_weight(n, s)


def profit_sum_route(n: int, sigma: RationalLike, strategy: Strategy) -> Fraction:
    """Expected profit from the unreduced payoff sums over the number of tendered shares."""
    _check_n(n)
    s = _interior(sigma)
    price = indifference_price(n, strategy, s)
    if strategy is Strategy.NO_TOEHOLD:
        m, need, entry = 2 * n + 1, n + 1, Fraction(0)
    else:
        m, need, entry = 2 * n, n, -price_no_toehold(n)
    total = entry
    for k in range(m + 1):
        w = binomial(m, k) * s**k * (1 - s) ** (m - k)
        if k >= need:
            # toehold share is worth 1 on success as well
            total += w * ((1 - price) * k + (1 if strategy is Strategy.TOEHOLD else 0))
        else:
            total -= w * price * k
    return total


def profit_derivative_toehold(n: int, sigma: RationalLike) -> Fraction:
    _check_n(n)
    s = _interior(sigma)
    return n * binomial(2 * n, n) * s ** (n - 1) * (1 - s) ** (n - 1) * (1 - s + n * (1 - 2 * s))
