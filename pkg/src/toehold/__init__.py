"""Exact equilibrium analysis of the toehold and no-toehold takeover strategies."""

from toehold.exact import DomainError, ExactRational, binomial, rational_pow, tail_binomial_sum
from toehold.model import ModelPoint, Strategy, model_point

__all__ = [
    "DomainError",
    "ExactRational",
    "ModelPoint",
    "Strategy",
    "binomial",
    "model_point",
    "rational_pow",
    "tail_binomial_sum",
]

__version__ = "0.1.0"
