"""Monte Carlo play of both tender-offer games and an exhaustive exact oracle.

Prices paid in a simulated game are the indifference prices at the configured
sigma, so at the equilibrium sigma they are the equilibrium prices. In the
toehold game the toehold itself always costs the no-toehold equilibrium price.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from toehold import model
from toehold.exact import DomainError, RationalLike, as_rational, canonical, tail_binomial_sum
from toehold.model import Strategy
from toehold.simulator import _kernels

# trial-range chunk handed to one worker; fixed so chunking never depends on worker count
CHUNK_TRIALS = 1 << 17
MAX_ENUMERATION_N = 6


@dataclass(frozen=True)
class SimConfig:
    n: int
    strategy: Strategy
    trials: int
    seed: int
    sigma: Optional[Fraction] = field(default=None)

    def __post_init__(self) -> None:
        model._check_n(self.n)
        if not isinstance(self.strategy, Strategy):
            raise DomainError(f"unknown strategy {self.strategy!r}")
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        s = model.equilibrium_sigma(self.n) if self.sigma is None else as_rational(self.sigma)
        if not 0 < s < 1:
            raise DomainError(f"sigma must lie strictly inside (0, 1), got {s}")
        object.__setattr__(self, "sigma", s)

    @property
    def shareholders(self) -> int:
        """Number of shareholders facing the tender offer."""
        return 2 * self.n + 1 if self.strategy is Strategy.NO_TOEHOLD else 2 * self.n

    @property
    def needed(self) -> int:
        return self.n + 1 if self.strategy is Strategy.NO_TOEHOLD else self.n


@dataclass(frozen=True)
class SimSummary:
    n: int
    strategy: Strategy
    sigma: Fraction
    trials: int
    seed: int
    takeover_count: int
    takeover_frequency: float
    mean_profit: float
    stderr_takeover: float
    stderr_profit: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "strategy": self.strategy.label,
            "sigma": canonical(self.sigma),
            "trials": self.trials,
            "seed": self.seed,
            "takeover_frequency": self.takeover_frequency,
            "mean_profit": self.mean_profit,
            "stderr_takeover": self.stderr_takeover,
            "stderr_profit": self.stderr_profit,
        }


def bernoulli_threshold(sigma: Fraction) -> int:
    """``sigma * 2**64`` rounded half-even, clamped to a valid uint64 threshold."""
    t = round(sigma * 2**64)
    return min(max(t, 1), 2**64 - 1)


def tender_histogram(config: SimConfig, *, workers: int = 1, backend: Optional[str] = None) -> np.ndarray:
    key = _kernels.seed_key(config.seed)
    thr = bernoulli_threshold(config.sigma)
    m = config.shareholders
    spans = [(lo, min(lo + CHUNK_TRIALS, config.trials)) for lo in range(0, config.trials, CHUNK_TRIALS)]

    def run(span: tuple[int, int]) -> np.ndarray:
        return _kernels.histogram(key, thr, m, span[0], span[1], backend)

    if workers <= 1 or len(spans) == 1:
        parts = [run(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, spans))
    total = np.zeros(m + 1, dtype=np.int64)
    for p in parts:
        total += p
    return total


def _game_prices(n: int, strategy: Strategy, sigma: Fraction) -> tuple[Fraction, Fraction]:
    """(tender price, toehold price) used when shareholders tender with ``sigma``."""
    price = model.indifference_price(n, strategy, sigma)
    toehold = model.price_no_toehold(n) if strategy is Strategy.TOEHOLD else Fraction(0)
    return price, toehold


def _payoff(strategy: Strategy, k: int, needed: int, price: Fraction, toehold: Fraction) -> Fraction:
    v = 1 if k >= needed else 0
    if strategy is Strategy.NO_TOEHOLD:
        return (v - price) * k
    return -toehold + v * (1 + k) - price * k


def _mean_and_stderr(weights: list[tuple[int, Fraction]], trials: int) -> tuple[float, float]:
    total = sum((c * x for c, x in weights), Fraction(0))
    mean = total / trials
    if trials < 2:
        return float(mean), 0.0
    ss = sum((c * (x - mean) ** 2 for c, x in weights), Fraction(0))
    var = ss / (trials - 1)
    return float(mean), math.sqrt(var / trials)


def run_trials(config: SimConfig, *, workers: int = 1, backend: Optional[str] = None) -> SimSummary:
    hist = tender_histogram(config, workers=workers, backend=backend)
    price, toehold = _game_prices(config.n, config.strategy, config.sigma)
    counts = [int(c) for c in hist]
    takeovers = sum(counts[config.needed :])
    won = [(c, Fraction(1 if k >= config.needed else 0)) for k, c in enumerate(counts) if c]
    profits = [(c, _payoff(config.strategy, k, config.needed, price, toehold)) for k, c in enumerate(counts) if c]
    freq, se_take = _mean_and_stderr(won, config.trials)
    mean_profit, se_profit = _mean_and_stderr(profits, config.trials)
    return SimSummary(
        n=config.n,
        strategy=config.strategy,
        sigma=config.sigma,
        trials=config.trials,
        seed=config.seed,
        takeover_count=takeovers,
        takeover_frequency=freq,
        mean_profit=mean_profit,
        stderr_takeover=se_take,
        stderr_profit=se_profit,
    )


def _enumerated_tail(others: int, needed: int, sigma: Fraction) -> Fraction:
    prob = Fraction(0)
    for outcome in itertools.product((0, 1), repeat=others):
        c = sum(outcome)
        if c >= needed:
            prob += sigma**c * (1 - sigma) ** (others - c)
    return prob


def enumerate_exact(n: int, sigma: RationalLike, strategy: Strategy) -> tuple[Fraction, Fraction]:
    """Exact (takeover probability, expected profit) by summing over every tender pattern.

    Prices come from the same enumeration applied to one shareholder's view of
    the others, so nothing here relies on binomial coefficients.
    """
    model._check_n(n)
    if n > MAX_ENUMERATION_N:
        raise DomainError(f"enumeration is limited to n <= {MAX_ENUMERATION_N}, got {n}")
    s = as_rational(sigma)
    if not 0 < s < 1:
        raise DomainError(f"sigma must lie strictly inside (0, 1), got {s}")
    if strategy is Strategy.NO_TOEHOLD:
        m, needed = 2 * n + 1, n + 1
        price = _enumerated_tail(2 * n, n + 1, s)
        toehold = Fraction(0)
    else:
        m, needed = 2 * n, n
        price = _enumerated_tail(2 * n - 1, n, s)
        toehold = _enumerated_tail(2 * n, n + 1, model.equilibrium_sigma(n))
    p_take = Fraction(0)
    profit = Fraction(0)
    for outcome in itertools.product((0, 1), repeat=m):
        k = sum(outcome)
        w = s**k * (1 - s) ** (m - k)
        if k >= needed:
            p_take += w
        profit += w * _payoff(strategy, k, needed, price, toehold)
    return p_take, profit


def exact_targets(config: SimConfig) -> tuple[Fraction, Fraction]:
    p = tail_binomial_sum(config.shareholders, config.needed, config.sigma)
    return p, model.profit_curve(config.n, config.sigma, config.strategy)


def _z(empirical: float, exact: Fraction, stderr: float) -> Optional[float]:
    diff = abs(empirical - float(exact))
    if stderr == 0:
        return 0.0 if diff == 0 else None
    return diff / stderr


def empirical_vs_exact(config: SimConfig, *, workers: int = 1, backend: Optional[str] = None) -> dict:
    summary = run_trials(config, workers=workers, backend=backend)
    p, profit = exact_targets(config)
    report = summary.to_json_dict()
    report.update(
        {
            "exact_takeover": canonical(p),
            "exact_profit": canonical(profit),
            "z_takeover": _z(summary.takeover_frequency, p, summary.stderr_takeover),
            "z_profit": _z(summary.mean_profit, profit, summary.stderr_profit),
        }
    )
    return report
