from fractions import Fraction

import pytest

from toehold.exact import ConsistencyError, DomainError, binomial, tail_binomial_sum
from toehold.model import (
    ModelPoint,
    Strategy,
    equilibrium_sigma,
    expected_profit,
    indifference_gap,
    model_point,
    price_no_toehold,
    price_toehold,
    profit_curve,
    profit_derivative_toehold,
    profit_sum_route,
    takeover_prob_no_toehold,
    takeover_prob_toehold,
)

F = Fraction
NT, TH = Strategy.NO_TOEHOLD, Strategy.TOEHOLD


@pytest.mark.parametrize("n,expected", [(1, F(2, 3)), (2, F(3, 5)), (10, F(11, 21))])
def test_equilibrium_sigma(n, expected):
    assert equilibrium_sigma(n) == expected


@pytest.mark.parametrize(
    "fn",
    [equilibrium_sigma, price_no_toehold, takeover_prob_no_toehold, price_toehold, takeover_prob_toehold, expected_profit, model_point],
)
@pytest.mark.parametrize("bad", [0, -3])
def test_nonpositive_n_rejected(fn, bad):
    with pytest.raises(DomainError):
        fn(bad)


def test_n1_values():
    assert price_no_toehold(1) == F(4, 9)
    assert takeover_prob_no_toehold(1) == F(20, 27)
    assert price_toehold(1) == F(2, 3)
    assert takeover_prob_toehold(1) == F(8, 9)
    assert expected_profit(1) == F(8, 9)


def test_n2_values():
    assert price_no_toehold(2) == F(297, 625)
    assert takeover_prob_no_toehold(2) == F(2133, 3125)
    assert price_toehold(2) == F(81, 125)
    assert takeover_prob_toehold(2) == F(513, 625)
    assert expected_profit(2) == F(648, 625)


def test_n2_hand_expansions():
    assert F(3 * 9 * 2 + 27, 125) == F(81, 125)
    assert F(216 + 216 + 81, 625) == F(513, 625)
    assert F(6 * 27 * 4, 625) == F(648, 625)
    assert 6 * F(3, 5) ** 3 * F(2, 5) ** 2 * 5 == F(648, 625)
    # P0(2): k = 3, 4, 5 of 5 shareholders at 3/5, over 5^5
    assert F(10 * 27 * 4 + 5 * 81 * 2 + 243, 5**5) == F(2133, 3125)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 40])
def test_sums_are_tail_reexpressions(n):
    s = equilibrium_sigma(n)
    assert price_no_toehold(n) == tail_binomial_sum(2 * n, n + 1, s)
    assert takeover_prob_no_toehold(n) == tail_binomial_sum(2 * n + 1, n + 1, s)
    assert price_toehold(n) == tail_binomial_sum(2 * n - 1, n, s)
    assert takeover_prob_toehold(n) == tail_binomial_sum(2 * n, n, s)


def test_sum_forms_over_common_denominator():
    # the printed form sum C(2n,k)(n+1)^k n^(2n-k)/(2n+1)^(2n)
    for n in range(1, 30):
        num = sum(binomial(2 * n, k) * (n + 1) ** k * n ** (2 * n - k) for k in range(n + 1, 2 * n + 1))
        assert price_no_toehold(n) == F(num, (2 * n + 1) ** (2 * n))


def test_profit_closed_form_settles_exponent_misprint():
    # (n+1) C(2n,n) (n+1)^n n^n / (2n+1)^(2n) is the same number as the closed form
    for n in range(1, 60):
        alt = F((n + 1) * binomial(2 * n, n) * (n + 1) ** n * n**n, (2 * n + 1) ** (2 * n))
        assert alt == expected_profit(n) == profit_sum_route(n, equilibrium_sigma(n), NT)


def test_model_point_n1_and_n2():
    assert model_point(1).to_json_dict() == {
        "n": 1, "sigma": "2/3", "x0": "4/9", "p0": "20/27", "x1": "2/3", "p1": "8/9", "profit": "8/9"
    }
    p = model_point(2)
    assert (p.sigma, p.price_no_toehold, p.takeover_prob_no_toehold) == (F(3, 5), F(297, 625), F(2133, 3125))
    assert (p.price_toehold, p.takeover_prob_toehold, p.expected_profit) == (F(81, 125), F(513, 625), F(648, 625))


def test_model_point_detects_corruption():
    good = model_point(3)
    bad = ModelPoint(**{**good.__dict__, "takeover_prob_toehold": good.takeover_prob_toehold + F(1, 10**9)})
    with pytest.raises(ConsistencyError):
        bad.check()


@pytest.mark.parametrize("n", range(1, 60))
def test_cross_identity_and_orderings(n):
    p = model_point(n)
    s = p.sigma
    assert p.takeover_prob_toehold == p.price_no_toehold + binomial(2 * n, n) * s**n * (1 - s) ** n
    assert F(1, 2) < p.takeover_prob_no_toehold < p.takeover_prob_toehold < 1
    assert 0 < p.price_no_toehold < p.price_toehold < 1


def test_profit_can_exceed_one():
    assert expected_profit(2) > 1


@pytest.mark.parametrize(
    "n,sigma,strategy,expected",
    [(1, F(2, 3), NT, F(8, 9)), (1, F(2, 3), TH, F(8, 9)), (2, F(1, 2), NT, F(15, 16))],
)
def test_profit_curve_examples(n, sigma, strategy, expected):
    assert profit_curve(n, sigma, strategy) == expected


@pytest.mark.parametrize("sigma", [F(0), F(1), F(-1, 3), F(4, 3)])
def test_boundary_sigma_rejected(sigma):
    for fn in (lambda: profit_curve(1, sigma, NT), lambda: profit_curve(1, sigma, TH),
               lambda: profit_derivative_toehold(1, sigma), lambda: indifference_gap(1, NT, F(1, 2), sigma)):
        with pytest.raises(DomainError):
            fn()


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
@pytest.mark.parametrize("sigma", [F(1, 4), F(1, 2), F(3, 4), F(2, 7)])
def test_sum_route_matches_profit_curve_off_equilibrium(n, sigma):
    for strategy in Strategy:
        assert profit_sum_route(n, sigma, strategy) == profit_curve(n, sigma, strategy)


@pytest.mark.parametrize("n,sigma,expected", [(1, F(2, 3), 0), (2, F(3, 5), 0), (1, F(1, 2), 1)])
def test_derivative_examples(n, sigma, expected):
    assert profit_derivative_toehold(n, sigma) == expected


@pytest.mark.parametrize("n", range(1, 11))
def test_derivative_against_central_difference(n):
    h = F(1, 10**6)
    for sigma in (F(1, 5), F(1, 2), equilibrium_sigma(n), F(4, 5)):
        fd = (profit_curve(n, sigma + h, TH) - profit_curve(n, sigma - h, TH)) / (2 * h)
        assert abs(fd - profit_derivative_toehold(n, sigma)) <= 10 * h


@pytest.mark.parametrize("n", range(1, 51))
def test_derivative_root_and_sign_change(n):
    s = equilibrium_sigma(n)
    d = F(1, 100 * n)
    assert profit_derivative_toehold(n, s) == 0
    assert profit_derivative_toehold(n, s - d) > 0
    assert profit_derivative_toehold(n, s + d) < 0


@pytest.mark.parametrize("n", range(1, 21))
def test_equilibrium_maximizes_on_grid(n):
    s = equilibrium_sigma(n)
    for strategy in Strategy:
        best = profit_curve(n, s, strategy)
        assert all(best >= profit_curve(n, F(k, 100), strategy) for k in range(1, 100))


def test_indifference_examples():
    assert indifference_gap(1, NT, F(4, 9), F(2, 3)) == 0
    assert indifference_gap(1, TH, F(2, 3), F(2, 3)) == 0
    assert indifference_gap(1, NT, F(1, 2), F(2, 3)) == F(1, 18)


@pytest.mark.parametrize("n", range(1, 40))
def test_indifference_zero_at_equilibrium(n):
    s = equilibrium_sigma(n)
    assert indifference_gap(n, NT, price_no_toehold(n), s) == 0
    assert indifference_gap(n, TH, price_toehold(n), s) == 0
