"""Rigorous three-valued audit of the published inequality claims.

Each claim is a chain of strict inequalities ``t0 < t1 < ... < tk``. Its margin
is the smallest gap ``t[i+1] - t[i]`` (over every chain the claim covers). A
claim HOLDS when the margin is provably positive, FAILS when it is provably
nonpositive, and is UNDECIDED otherwise.
"""

from __future__ import annotations

import enum
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from toehold import beta_forms, model
from toehold.bounds.interval import (
    Interval,
    central_binomial_normalized,
    exp_interval,
    interval_from_rational,
    interval_min,
    inverse_sqrt_pi_n,
    stirling_remainder,
)
from toehold.exact import DomainError

MARGIN_DIGITS = 15

# x values shared by the three elementary-inequality claims
ELEM_X_GRID: tuple[Fraction, ...] = (
    Fraction(1, 10**6),
    Fraction(1, 100),
    Fraction(1, 10),
    Fraction(1, 3),
    Fraction(1),
    Fraction(3),
)


class ClaimId(enum.Enum):
    X0_BOUNDS = "X0_BOUNDS"
    X1_BOUNDS = "X1_BOUNDS"
    P0_BOUNDS = "P0_BOUNDS"
    P1_BOUNDS = "P1_BOUNDS"
    PI_BOUNDS = "PI_BOUNDS"
    DIFF_P_BOUNDS = "DIFF_P_BOUNDS"
    DIFF_X_BOUNDS = "DIFF_X_BOUNDS"
    ELEM_INEQ_1 = "ELEM_INEQ_1"
    ELEM_INEQ_2 = "ELEM_INEQ_2"
    ELEM_INEQ_3 = "ELEM_INEQ_3"
    SOME_1 = "SOME_1"
    SOME_2 = "SOME_2"
    SOME_3 = "SOME_3"
    SOME_4 = "SOME_4"
    STIRLING_REMAINDER = "STIRLING_REMAINDER"
    CENTRAL_BINOM_BOUNDS = "CENTRAL_BINOM_BOUNDS"

    @classmethod
    def parse(cls, name: str) -> "ClaimId":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise DomainError(f"unknown claim {name!r}") from None


ALL_CLAIMS: tuple[ClaimId, ...] = tuple(ClaimId)
_ORDER = {c: i for i, c in enumerate(ALL_CLAIMS)}


class Status(enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNDECIDED = "UNDECIDED"


def _render(x: Fraction, rounding: str) -> str:
    if x == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = MARGIN_DIGITS
        ctx.rounding = rounding
        d = Decimal(x.numerator) / Decimal(x.denominator)
    return f"{d:.{MARGIN_DIGITS - 1}e}"


@dataclass(frozen=True)
class Verdict:
    claim: ClaimId
    n: int
    status: Status
    precision_bits: int
    margin_lo: Fraction
    margin_hi: Fraction

    def to_json(self) -> str:
        return json.dumps(
            {
                "claim": self.claim.value,
                "n": self.n,
                "status": self.status.value,
                "precision_bits": self.precision_bits,
                "margin_lo": _render(self.margin_lo, ROUND_FLOOR),
                "margin_hi": _render(self.margin_hi, ROUND_CEILING),
            }
        )


Term = Union[Fraction, Interval]
Chain = Sequence[Term]


# ---------------------------------------------------------------- claim chains
#
# Each builder returns a list of chains. Chains made only of Fractions are
# decided exactly; any Interval term switches the whole claim to intervals.


def _shifted(n: int, p: int, coeffs: tuple[Fraction, ...], offset: Fraction) -> Interval:
    """``offset + (c0 + c1/n + c2/n^2) / sqrt(pi n)``."""
    poly = sum((c / Fraction(n) ** i for i, c in enumerate(coeffs)), Fraction(0))
    return offset + inverse_sqrt_pi_n(n, p) * poly


F = Fraction
HALF = F(1, 2)

# (lower coefficients, upper coefficients, offset, exact quantity)
_PARAMETER_BOUNDS: dict[ClaimId, tuple[tuple[F, ...], tuple[F, ...], F, Callable[[int], F]]] = {
    ClaimId.X0_BOUNDS: ((F(0), F(-1, 6), F(-1, 64)), (F(0), F(-1, 6), F(5, 24)), HALF, model.price_no_toehold),
    ClaimId.X1_BOUNDS: ((HALF, F(-5, 16), F(1, 48)), (HALF, F(-5, 16), F(1, 12)), HALF, model.price_toehold),
    ClaimId.P0_BOUNDS: (
        (HALF, F(-5, 48), F(1, 16)),
        (HALF, F(-5, 48), F(6, 16)),
        HALF,
        model.takeover_prob_no_toehold,
    ),
    ClaimId.P1_BOUNDS: (
        (F(1), F(-13, 24), F(3, 16)),
        (F(1), F(-13, 24), F(4, 16)),
        HALF,
        model.takeover_prob_toehold,
    ),
    ClaimId.DIFF_P_BOUNDS: (
        (HALF, F(-31, 48), F(-3, 16)),
        (HALF, F(-31, 48), F(3, 16)),
        F(0),
        lambda n: model.takeover_prob_toehold(n) - model.takeover_prob_no_toehold(n),
    ),
    ClaimId.DIFF_X_BOUNDS: (
        (HALF, F(-7, 48), F(-3, 16)),
        (HALF, F(-7, 48), F(1, 24)),
        F(0),
        lambda n: model.price_toehold(n) - model.price_no_toehold(n),
    ),
}


def _parameter_chain(claim: ClaimId, n: int, p: int) -> list[Chain]:
    lower, upper, offset, quantity = _PARAMETER_BOUNDS[claim]
    return [[_shifted(n, p, lower, offset), quantity(n), _shifted(n, p, upper, offset)]]


def _profit_chain(n: int, p: int) -> list[Chain]:
    # (n + 5/8 - 1/(4n)) / sqrt(pi n)  <  Pi  <  (n + 5/8 - 1/(24n) + 1/(3n^2)) / sqrt(pi n)
    s = inverse_sqrt_pi_n(n, p)
    lower = s * (n + F(5, 8) - F(1, 4 * n))
    upper = s * (n + F(5, 8) - F(1, 24 * n) + F(1, 3 * n * n))
    return [[lower, model.expected_profit(n), upper]]


def _elem_1(n: int, p: int) -> list[Chain]:
    chains = []
    for x in ELEM_X_GRID:
        e = exp_interval(interval_from_rational(-x, p), p)
        chains.append([1 - x, 1 - x + x**2 / 2 - x**3 / 6, e, 1 - x + x**2 / 2])
    return chains


def _elem_2(n: int, p: int) -> list[Chain]:
    return [[1 - x, 1 / (1 + x), 1 - x + x**2] for x in ELEM_X_GRID]


def _elem_3(n: int, p: int) -> list[Chain]:
    return [[1 - n * x, (1 - x) ** n, 1 - n * x + F(n * (n - 1), 2) * x**2] for x in ELEM_X_GRID]


def _some_1(n: int, p: int) -> list[Chain]:
    base = F(1, 2 * n) - F(1, 4 * n * n)
    return [[base + F(1, 12 * n**3), F(1, 2 * n + 1), base + F(1, 8 * n**3)]]


def _some_2(n: int, p: int) -> list[Chain]:
    base = 1 - F(1, 4 * n)
    return [[base + F(1, 8 * n * n), (1 - F(1, (2 * n + 1) ** 2)) ** n, base + F(9, 32 * n * n)]]


def _some_integral(n: int, m: int, lo48: int, hi48: int) -> list[Chain]:
    base = F(1, 2 * n) - F(7, 24 * n * n)
    value = beta_forms.symmetric_integral_exact(m, F(1, 2 * n + 1))
    return [[base + F(lo48, 48 * n**3), value, base + F(hi48, 48 * n**3)]]


def _some_3(n: int, p: int) -> list[Chain]:
    return _some_integral(n, n, 11, 18)


def _some_4(n: int, p: int) -> list[Chain]:
    return _some_integral(n, n - 1, 5, 12)


def _stirling(n: int, p: int) -> list[Chain]:
    top = F(1, 12 * n)
    return [[top - F(1, 192 * n**3), stirling_remainder(n, p), top]]


def _central_binom(n: int, p: int) -> list[Chain]:
    base = 1 - F(1, 8 * n)
    return [[base + F(1, 64 * n * n), central_binomial_normalized(n, p), base + F(1, 48 * n * n)]]


_BUILDERS: dict[ClaimId, Callable[[int, int], list[Chain]]] = {
    **{c: (lambda n, p, c=c: _parameter_chain(c, n, p)) for c in _PARAMETER_BOUNDS},
    ClaimId.PI_BOUNDS: _profit_chain,
    ClaimId.ELEM_INEQ_1: _elem_1,
    ClaimId.ELEM_INEQ_2: _elem_2,
    ClaimId.ELEM_INEQ_3: _elem_3,
    ClaimId.SOME_1: _some_1,
    ClaimId.SOME_2: _some_2,
    ClaimId.SOME_3: _some_3,
    ClaimId.SOME_4: _some_4,
    ClaimId.STIRLING_REMAINDER: _stirling,
    ClaimId.CENTRAL_BINOM_BOUNDS: _central_binom,
}

EXACT_CLAIMS = frozenset({ClaimId.ELEM_INEQ_2, ClaimId.ELEM_INEQ_3, ClaimId.SOME_1, ClaimId.SOME_2, ClaimId.SOME_3, ClaimId.SOME_4})


def _gaps(chains: Iterable[Chain]) -> list[Term]:
    return [b - a for chain in chains for a, b in zip(chain, chain[1:])]


def _decide(lo: Fraction, hi: Fraction) -> Status:
    if lo > 0:
        return Status.HOLDS
    if hi <= 0:
        return Status.FAILS
    return Status.UNDECIDED


def claim_chains(claim: ClaimId, n: int, precision_bits: int, *, force_intervals: bool = False) -> list[Chain]:
    chains = _BUILDERS[claim](n, precision_bits)
    if force_intervals:
        chains = [[t if isinstance(t, Interval) else interval_from_rational(t, precision_bits) for t in c] for c in chains]
    return chains


def audit_claim(claim: ClaimId, n: int, precision_bits: int = 192, *, force_intervals: bool = False) -> Verdict:
    """Verdict for ``claim`` at ``n``.

    Claims whose terms are all rational are compared exactly; ``force_intervals``
    routes them through point enclosures instead, for cross-checking.
    """
    if not isinstance(claim, ClaimId):
        raise DomainError(f"unknown claim {claim!r}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    gaps = _gaps(claim_chains(claim, n, precision_bits, force_intervals=force_intervals))
    if all(isinstance(g, Fraction) for g in gaps):
        m = min(gaps)
        lo = hi = m
    else:
        enclosures = [g if isinstance(g, Interval) else interval_from_rational(g, precision_bits) for g in gaps]
        m_int = interval_min(*enclosures)
        lo, hi = m_int.lo_exact, m_int.hi_exact
    return Verdict(claim, n, _decide(lo, hi), precision_bits, lo, hi)


def _audit_chunk(args: tuple[ClaimId, int, int, int]) -> list[Verdict]:
    claim, n_lo, n_hi, precision_bits = args
    return [audit_claim(claim, n, precision_bits) for n in range(n_lo, n_hi + 1)]


def audit_range(
    claims: Sequence[ClaimId], n_lo: int, n_hi: int, precision_bits: int = 192, *, workers: int = 1
) -> list[Verdict]:
    """One verdict per (claim, n), ordered by claim declaration order then n."""
    if n_lo < 1 or n_lo > n_hi:
        raise DomainError(f"invalid n range {n_lo}..{n_hi}")
    ordered = sorted(set(claims), key=_ORDER.__getitem__)
    jobs = [(c, n_lo, n_hi, precision_bits) for c in ordered]
    if workers <= 1 or len(jobs) <= 1:
        chunks = [_audit_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_audit_chunk, jobs))
    return [v for chunk in chunks for v in chunk]
