from toehold.simulator.core import (
    SimConfig,
    SimSummary,
    bernoulli_threshold,
    empirical_vs_exact,
    enumerate_exact,
    run_trials,
    tender_histogram,
)

__all__ = [
    "SimConfig",
    "SimSummary",
    "bernoulli_threshold",
    "empirical_vs_exact",
    "enumerate_exact",
    "run_trials",
    "tender_histogram",
]
