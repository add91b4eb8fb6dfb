"""Exact parameters against their large-n approximants."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

import mpmath
from mpmath.libmp import to_rational

from toehold.exact import to_decimal
from toehold.model import ModelPoint, model_point

# name -> (exact value, approximant(n, sqrt(pi n)))
QUANTITIES: dict[str, tuple[Callable[[ModelPoint], Fraction], Callable]] = {
    "profit": (lambda p: p.expected_profit, lambda n, r: r / mpmath.pi),
    "p0": (lambda p: p.takeover_prob_no_toehold, lambda n, r: mpmath.mpf(1) / 2 + 1 / (2 * r)),
    "p1": (lambda p: p.takeover_prob_toehold, lambda n, r: mpmath.mpf(1) / 2 + 1 / r),
    "x0": (lambda p: p.price_no_toehold, lambda n, r: mpmath.mpf(1) / 2 - 1 / (6 * n * r)),
    "x1": (lambda p: p.price_toehold, lambda n, r: mpmath.mpf(1) / 2 + 1 / (2 * r)),
    "p1_minus_p0": (lambda p: p.p1_minus_p0, lambda n, r: 1 / (2 * r)),
    "x1_minus_x0": (lambda p: p.x1_minus_x0, lambda n, r: 1 / (2 * r)),
}


def header() -> list[str]:
    cols = ["n"]
    for name in QUANTITIES:
        cols += [f"{name}_exact", f"{name}_approx", f"{name}_scaled_residual"]
    return cols


def _mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    p, q = to_rational(x._mpf_)
    return Fraction(int(p), int(q))


def sweep_row(n: int, digits: int) -> list[str]:
    """One row: exact value, approximant and ``sqrt(pi n) (exact - approx)`` per quantity."""
    point = model_point(n)
    row = [str(n)]
    # sqrt(n/pi) is written as sqrt(pi n)/pi so every approximant shares one root
    with mpmath.workdps(2 * digits + 20):
        r = mpmath.sqrt(mpmath.pi * n)
        for exact_of, approx_of in QUANTITIES.values():
            exact = exact_of(point)
            approx = approx_of(n, r)
            resid = r * (mpmath.mpf(exact.numerator) / exact.denominator - approx)
            row += [
                to_decimal(exact, digits),
                to_decimal(_mpf_to_fraction(approx), digits),
                to_decimal(_mpf_to_fraction(resid), digits),
            ]
    return row
