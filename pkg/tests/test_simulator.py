import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toehold import model
from toehold.exact import DomainError, tail_binomial_sum
from toehold.model import Strategy
from toehold.simulator import (
    SimConfig,
    bernoulli_threshold,
    empirical_vs_exact,
    enumerate_exact,
    run_trials,
    tender_histogram,
)
from toehold.simulator import _kernels
from toehold.simulator.core import exact_targets

F = Fraction
BOTH = [Strategy.NO_TOEHOLD, Strategy.TOEHOLD]
needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba backend unavailable")


def test_enumeration_n1_examples():
    assert enumerate_exact(1, F(2, 3), Strategy.NO_TOEHOLD) == (F(20, 27), F(8, 9))
    assert enumerate_exact(1, F(2, 3), Strategy.TOEHOLD) == (F(8, 9), F(8, 9))
    # off-equilibrium: 3 shareholders tendering with 1/2, price = P(other 2 both tender) = 1/4
    p, profit = enumerate_exact(1, F(1, 2), Strategy.NO_TOEHOLD)
    assert p == F(1, 2)
    # (2n+1) C(2n,n) s^(n+1) (1-s)^n = 3 * 2 * 1/4 * 1/2 = 3/4
    assert profit == F(3, 4)


@pytest.mark.parametrize("strategy", BOTH)
def test_enumeration_matches_closed_forms_at_equilibrium(strategy):
    for n in range(1, 6):
        sigma = model.equilibrium_sigma(n)
        p, profit = enumerate_exact(n, sigma, strategy)
        expected_p = model.takeover_prob_no_toehold(n) if strategy is Strategy.NO_TOEHOLD else model.takeover_prob_toehold(n)
        assert p == expected_p
        assert profit == model.expected_profit(n)


@pytest.mark.parametrize("strategy", BOTH)
@pytest.mark.parametrize("sigma", [F(1, 4), F(1, 2), F(3, 4)])
def test_enumeration_matches_closed_forms_off_equilibrium(strategy, sigma):
    for n in range(1, 5):
        config = SimConfig(n, strategy, 1, 0, sigma)
        assert enumerate_exact(n, sigma, strategy) == exact_targets(config)


def test_enumeration_limits():
    with pytest.raises(DomainError):
        enumerate_exact(7, F(1, 2), Strategy.NO_TOEHOLD)
    with pytest.raises(DomainError):
        enumerate_exact(0, F(1, 2), Strategy.NO_TOEHOLD)
    with pytest.raises(DomainError):
        enumerate_exact(2, F(1), Strategy.TOEHOLD)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n=0, strategy=Strategy.TOEHOLD, trials=10, seed=1),
        dict(n=1, strategy=Strategy.TOEHOLD, trials=0, seed=1),
        dict(n=1, strategy=Strategy.TOEHOLD, trials=10, seed=-1),
        dict(n=1, strategy=Strategy.TOEHOLD, trials=10, seed=2**64),
        dict(n=1, strategy=Strategy.TOEHOLD, trials=10, seed=1, sigma=F(0)),
        dict(n=1, strategy=Strategy.TOEHOLD, trials=10, seed=1, sigma=F(3, 2)),
        dict(n=1, strategy=1, trials=10, seed=1),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(DomainError):
        SimConfig(**kwargs)


def test_config_defaults_and_shapes():
    c = SimConfig(3, Strategy.NO_TOEHOLD, 10, 5)
    assert c.sigma == model.equilibrium_sigma(3) == F(4, 7)
    assert (c.shareholders, c.needed) == (7, 4)
    t = SimConfig(3, Strategy.TOEHOLD, 10, 5)
    assert (t.shareholders, t.needed) == (6, 3)


def test_threshold_rounding():
    assert bernoulli_threshold(F(1, 2)) == 2**63
    assert bernoulli_threshold(F(2, 3)) == round(F(2**65, 3))
    assert bernoulli_threshold(F(1, 2**80)) == 1
    assert bernoulli_threshold(1 - F(1, 2**80)) == 2**64 - 1


def test_reference_draws_match_kernel_histogram():
    seed, sigma, m = 42, F(2, 3), 3
    thr = bernoulli_threshold(sigma)
    hist = np.zeros(m + 1, dtype=np.int64)
    for t in range(2000):
        hist[sum(_kernels.draw(seed, t, j) < thr for j in range(m))] += 1
    got = _kernels.histogram(_kernels.seed_key(seed), thr, m, 0, 2000, "numpy")
    assert np.array_equal(hist, got)


@needs_numba
@given(st.integers(0, 2**64 - 1), st.integers(1, 2**64 - 1), st.integers(1, 40), st.integers(0, 10**6), st.integers(0, 500))
@settings(max_examples=50)
def test_backends_agree(key, thr, m, start, length):
    a = _kernels.histogram(key, thr, m, start, start + length, "numba")
    b = _kernels.histogram(key, thr, m, start, start + length, "numpy")
    assert np.array_equal(a, b)
    assert a.sum() == length


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.histogram(1, 2, 3, 0, 4, "fortran")


@pytest.mark.parametrize("backend", ["numpy", pytest.param("numba", marks=needs_numba)])
def test_determinism_across_runs_and_workers(backend):
    config = SimConfig(5, Strategy.TOEHOLD, 300_000, 7)
    base = run_trials(config, backend=backend)
    assert run_trials(config, backend=backend) == base
    assert run_trials(config, workers=4, backend=backend) == base
    assert np.array_equal(tender_histogram(config, workers=3, backend=backend), tender_histogram(config, backend=backend))


@needs_numba
def test_backends_give_identical_summaries():
    config = SimConfig(25, Strategy.NO_TOEHOLD, 200_000, 123)
    assert run_trials(config, backend="numba") == run_trials(config, backend="numpy")


def test_env_flag_selects_numpy_fallback():
    code = "from toehold.simulator import _kernels as k; print(k.DEFAULT_BACKEND, k.HAVE_NUMBA)"
    env = dict(os.environ, TOEHOLD_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False"]


def test_single_trial_is_robust():
    s = run_trials(SimConfig(1, Strategy.NO_TOEHOLD, 1, 42))
    assert s.stderr_takeover == 0.0 and s.stderr_profit == 0.0
    assert s.takeover_frequency in (0.0, 1.0)
    report = empirical_vs_exact(SimConfig(1, Strategy.NO_TOEHOLD, 1, 42))
    assert report["z_takeover"] is None or report["z_takeover"] == 0.0


def test_small_trial_counts():
    s = run_trials(SimConfig(2, Strategy.TOEHOLD, 10, 3))
    assert s.trials == 10
    assert 0 <= s.takeover_count <= 10
    assert s.takeover_frequency == s.takeover_count / 10


def test_summary_json_fields():
    d = run_trials(SimConfig(1, Strategy.TOEHOLD, 100, 9)).to_json_dict()
    assert list(d) == ["n", "strategy", "sigma", "trials", "seed", "takeover_frequency", "mean_profit", "stderr_takeover", "stderr_profit"]
    assert d["strategy"] == "toehold" and d["sigma"] == "2/3"


def test_payoffs_average_to_exact_profit_over_full_distribution():
    # feeding the exact binomial weights through the payoff rule reproduces profit_curve
    from toehold.simulator.core import _game_prices, _payoff
    from toehold.exact import binomial

    for strategy in BOTH:
        for sigma in (F(1, 3), model.equilibrium_sigma(4)):
            c = SimConfig(4, strategy, 1, 0, sigma)
            price, toe = _game_prices(4, strategy, sigma)
            m = c.shareholders
            total = sum(binomial(m, k) * sigma**k * (1 - sigma) ** (m - k) * _payoff(strategy, k, c.needed, price, toe) for k in range(m + 1))
            assert total == model.profit_curve(4, sigma, strategy)


@pytest.mark.slow
def test_statistical_soundness_over_seeds():
    config_args = dict(n=5, strategy=Strategy.NO_TOEHOLD, trials=100_000)
    inside = 0
    for seed in range(50):
        r = empirical_vs_exact(SimConfig(seed=seed, **config_args))
        if r["z_takeover"] <= 3 and r["z_profit"] <= 3:
            inside += 1
    assert inside >= 47


def test_takeover_count_matches_tail_on_large_run():
    c = SimConfig(1, Strategy.NO_TOEHOLD, 10**6, 42)
    s = run_trials(c)
    exact = tail_binomial_sum(3, 2, F(2, 3))
    assert abs(s.takeover_frequency - float(exact)) <= 4 * s.stderr_takeover
