import numpy as np
import pytest

from stackelberg_pow.experiments import ScenarioSpec, draw_miners
from stackelberg_pow.game import (
    MarketParams,
    ValidationError,
    make_miners,
    miner_profits,
    nash_equilibrium,
    optimal_reward,
    stackelberg_solve,
    utility_at_reward,
)
from stackelberg_pow.oracles import (
    best_response_iteration,
    deviation_gain,
    finite_difference_gradient,
    grid_search_reward,
    grid_search_reward_x,
)

UNIT = MarketParams(blocks_per_day=1.0)
DEFAULT = MarketParams()


def test_iteration_symmetric_pair():
    trace = best_response_iteration(make_miners([1, 1]), 1.0, UNIT, tol=1e-12)
    assert trace.converged
    np.testing.assert_allclose(trace.final_profile, [0.25, 0.25], atol=1e-11)


def test_iteration_three_miners():
    trace = best_response_iteration(make_miners([1, 2, 3]), 1.0, UNIT, tol=1e-14)
    assert trace.converged
    np.testing.assert_allclose(trace.final_profile, [2 / 9, 1 / 9, 0.0], atol=1e-12)


def test_iteration_reports_non_convergence():
    trace = best_response_iteration(make_miners([1, 2, 3]), 1.0, UNIT, tol=1e-14, max_sweeps=3)
    assert not trace.converged
    assert trace.iterations == 3
    assert trace.max_step_delta >= 1e-14


def test_undamped_iteration_can_cycle():
    # the cheapest miner overshoots and every rival drops out each other sweep
    rng = np.random.default_rng(74)
    n = int(rng.integers(2, 51))
    miners = make_miners(rng.uniform(1.0, 10.0, n))
    reward = float(rng.uniform(0.1, 100.0))
    plain = best_response_iteration(miners, reward, DEFAULT, max_sweeps=2000, relaxation=1.0)
    damped = best_response_iteration(miners, reward, DEFAULT)
    assert not plain.converged
    assert damped.converged


def test_iteration_validation():
    with pytest.raises(ValidationError):
        best_response_iteration(make_miners([1, 2]), 0.0, UNIT)
    with pytest.raises(ValidationError):
        best_response_iteration(make_miners([1, 2]), 1.0, UNIT, init=[1.0, 0.0])
    with pytest.raises(ValidationError):
        best_response_iteration(make_miners([1]), 1.0, UNIT)


def test_iteration_default_scenario_matches_closed_form():
    miners = draw_miners(ScenarioSpec(), 0)
    out = stackelberg_solve(miners, DEFAULT)
    trace = best_response_iteration(miners, out.reward, DEFAULT)
    assert trace.converged
    mu = out.nash.strategies
    assert np.abs(trace.final_profile - mu).max() <= 1e-7 * mu.max()


@pytest.mark.parametrize("n", [2, 5, 13, 50])
def test_uniqueness_from_random_starts(n):
    rng = np.random.default_rng(1000 + n)
    miners = make_miners(rng.uniform(1.0, 10.0, n))
    reward = float(rng.uniform(0.1, 100.0))
    ne = nash_equilibrium(miners, reward, DEFAULT)
    tol = 1e-13 * ne.strategies.max()
    finals = []
    for _ in range(10):
        init = rng.uniform(0.01, 2.0, n) * ne.strategies.max()
        trace = best_response_iteration(miners, reward, DEFAULT, init=init, tol=tol)
        assert trace.converged
        finals.append(trace.final_profile)
    for f in finals[1:]:
        assert np.abs(f - finals[0]).max() <= 1e-6


def test_deviation_gain_is_non_positive_at_equilibrium():
    miners = make_miners([1.0, 1.3, 2.2, 2.5, 7.0])
    ne = nash_equilibrium(miners, 5.0, DEFAULT)
    profits = miner_profits(ne.strategies, 5.0, DEFAULT, [m.lam for m in miners])
    assert np.all(deviation_gain(miners, ne.strategies, 5.0, DEFAULT) <= 1e-9 * (1 + np.abs(profits)))


def test_deviation_gain_detects_non_equilibrium():
    miners = make_miners([1.0, 1.0])
    assert deviation_gain(miners, [1.0, 0.01], 1.0, UNIT).max() > 0.01


def test_grid_search_low_leverage():
    r, u = grid_search_reward_x(1.0, MarketParams(alpha=10, beta=0.1))
    assert r == 0.0 and u == 0.0


def test_grid_search_interior():
    params = MarketParams(alpha=8, beta=0.5, reward_cap=10.0)
    r, _ = grid_search_reward_x(2.0, params, 1_000_000)
    step = 10.0 / (1_000_000 - 1)
    assert abs(r - 1.76275) <= step + 5e-6
    assert abs(r - optimal_reward(2.0, params)) <= step


def test_grid_search_clamped():
    params = MarketParams(alpha=8, beta=0.5, reward_cap=1.0)
    r, _ = grid_search_reward_x(2.0, params, 10_000)
    assert r == 1.0


def test_grid_search_rejects_coarse_grid():
    with pytest.raises(ValidationError):
        grid_search_reward_x(1.0, DEFAULT, 999)


def test_grid_search_from_miners():
    miners = make_miners([1, 1])
    r, _ = grid_search_reward(miners, DEFAULT, 1_000_000)
    assert abs(r - stackelberg_solve(miners, DEFAULT).reward) <= DEFAULT.reward_cap / (1_000_000 - 1)


def test_utility_is_unimodal_on_grid():
    x = 1.426
    grid = np.linspace(0, DEFAULT.reward_cap, 10_000)
    d = np.diff(utility_at_reward(grid, x, DEFAULT))
    assert np.count_nonzero(np.diff(np.sign(d[d != 0]))) <= 1


def test_finite_difference_of_square():
    assert finite_difference_gradient(lambda x: x * x, 3.0, 1e-5) == pytest.approx(6.0, abs=1e-8)
