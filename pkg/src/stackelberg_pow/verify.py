"""Quick oracle cross-checks behind ``stackelberg-pow verify``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import (
    MarketParams,
    make_miners,
    miner_profit_gradient,
    miner_profits,
    nash_equilibrium,
    optimal_reward,
    utility_at_reward,
    utility_gradient,
)
from .oracles import best_response_iteration, deviation_gain, finite_difference_gradient, grid_search_reward_x
from .security import AttackScenario, attacker_win_probability, simulate_attack_race


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    converged: bool = True


def _nash_vs_iteration(rng, scenarios: int) -> CheckResult:
    params = MarketParams()
    worst = 0.0
    worst_gain = 0.0
    for _ in range(scenarios):
        n = int(rng.integers(2, 51))
        lam = rng.uniform(1.0, 10.0, n)
        reward = float(rng.uniform(0.1, 100.0))
        miners = make_miners(lam)
        ne = nash_equilibrium(miners, reward, params)
        scale = ne.strategies.max()
        trace = best_response_iteration(miners, reward, params, tol=1e-13 * scale)
        if not trace.converged:
            return CheckResult("nash-vs-iteration", False, f"no convergence after {trace.iterations} sweeps", False)
        worst = max(worst, float(np.abs(trace.final_profile - ne.strategies).max() / scale))
        profits = miner_profits(ne.strategies, reward, params, lam)
        worst_gain = max(worst_gain, float((deviation_gain(miners, ne.strategies, reward, params)
                                            / (1.0 + np.abs(profits))).max()))
    ok = worst <= 1e-7 and worst_gain <= 1e-9
    return CheckResult("nash-vs-iteration", ok,
                       f"max rel. gap {worst:.2e}, max deviation gain {worst_gain:.2e} over {scenarios} markets")


def _reward_vs_grid(rng, scenarios: int) -> CheckResult:
    worst_steps = 0.0
    for _ in range(scenarios):
        params = MarketParams(alpha=float(rng.uniform(2, 2e4)), beta=float(rng.uniform(1e-4, 0.5)),
                              reward_cap=float(rng.uniform(1, 5000)))
        x = float(rng.uniform(0.01, 5.0))
        grid_points = 100_000
        step = params.reward_cap / (grid_points - 1)
        r_grid, _ = grid_search_reward_x(x, params, grid_points)
        worst_steps = max(worst_steps, abs(optimal_reward(x, params) - r_grid) / step)
    return CheckResult("reward-vs-grid", worst_steps <= 1.0,
                       f"max gap {worst_steps:.3f} grid steps over {scenarios} markets")


def _gradients(rng, scenarios: int) -> CheckResult:
    worst = 0.0
    for _ in range(scenarios):
        params = MarketParams(blocks_per_day=float(rng.uniform(1, 200)))
        reward = float(rng.uniform(0.1, 100))
        lam = float(rng.uniform(1, 10))
        others = float(rng.uniform(0.1, 50))
        mu = float(rng.uniform(0.1, 50))

        def profit(m, others=others, reward=reward, lam=lam, params=params):
            return m / (m + others) * reward * params.blocks_per_day - lam * m

        fd = finite_difference_gradient(profit, mu, 1e-5 * mu)
        exact = miner_profit_gradient(mu, others, reward, params, lam)
        worst = max(worst, abs(fd - exact) / max(abs(exact), 1.0))

        x = float(rng.uniform(0.1, 5))
        r = float(rng.uniform(0, params.reward_cap))
        fd = finite_difference_gradient(lambda rr: utility_at_reward(rr, x, params), r, 1e-4)
        exact = utility_gradient(r, x, params)
        worst = max(worst, abs(fd - exact) / max(abs(exact), 1.0))
    return CheckResult("gradients-vs-finite-differences", worst <= 1e-6, f"max rel. error {worst:.2e}")


def _attack_vs_race(seed: int, trials: int) -> CheckResult:
    misses = []
    cells = [(1, 10, 1), (1, 10, 4), (3, 10, 2), (4, 10, 3)]
    for k, (h, total, z) in enumerate(cells):
        scenario = AttackScenario(h, total, z)
        est = simulate_attack_race(scenario, trials, seed + k)
        exact = attacker_win_probability(scenario)
        # a quick screen at 3 half-widths, not a coverage test
        if abs(est.probability - exact) > 3 * est.half_width:
            misses.append(f"h={h},H={total},z={z}")
    return CheckResult("attack-formula-vs-race", not misses,
                       "all cells within 3 half-widths" if not misses else "outside: " + ", ".join(misses))


def run_checks(seed: int = 0, scenarios: int = 20, race_trials: int = 100_000) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [
        _nash_vs_iteration(rng, scenarios),
        _reward_vs_grid(rng, scenarios),
        _gradients(rng, scenarios),
        _attack_vs_race(seed, race_trials),
    ]
