"""Slow, independent solvers used to cross-check the closed forms.

None of these reuse the participant-set construction: the miners' oracle
iterates individual best responses, the reward oracle scans a grid.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .game import (
    MarketParams,
    MinerProfile,
    ValidationError,
    aggregate_factor,
    best_response,
    miner_profits,
    participant_set,
    utility_at_reward,
)


@dataclass(frozen=True)
class IterationTrace:
    iterations: int
    final_profile: np.ndarray
    max_step_delta: float
    converged: bool


def default_start(miners: Sequence[MinerProfile], reward: float, params: MarketParams) -> np.ndarray:
    lam = np.array([m.lam for m in miners])
    return reward * params.blocks_per_day / (2 * len(miners) * lam)


def best_response_iteration(miners: Sequence[MinerProfile], reward: float, params: MarketParams,
                            init=None, tol: float = 1e-10, max_sweeps: int = 100_000,
                            relaxation: float = 0.5) -> IterationTrace:
    """Gauss-Seidel best-response dynamics.

    Miners update in list order, each seeing the others' latest purchases,
    and move a fraction ``relaxation`` of the way to their best response.
    Undamped sweeps (``relaxation=1``) can cycle: the cheapest miner
    overshoots, every rival drops out, and it retreats again.  Damping keeps
    all strategies strictly positive, so nobody is ever left unopposed.

    Stops once a whole sweep moves no strategy by ``tol`` or more.
    """
    if reward <= 0:
        raise ValidationError("best-response iteration needs a positive reward")
    if len(miners) < 2:
        raise ValidationError("at least two miners are required")
    if not 0 < relaxation <= 1:
        raise ValidationError("relaxation must lie in (0, 1]")
    lam = [m.lam for m in miners]
    mu = default_start(miners, reward, params) if init is None else np.array(init, dtype=float)
    if mu.shape != (len(miners),) or np.any(mu <= 0):
        raise ValidationError("initial profile must be strictly positive, one entry per miner")

    total = float(mu.sum())
    delta = np.inf
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        delta = 0.0
        for i, lam_i in enumerate(lam):
            others = total - mu[i]
            if others <= 0:
                # float cancellation can leave a tiny negative remainder
                others = float(mu.sum() - mu[i])
            if others > 0:
                target = best_response(lam_i, others, reward, params)
            else:
                # unopposed (undamped only): profit rises as the purchase shrinks
                target = 0.5 * mu[i]
            new = mu[i] + relaxation * (target - mu[i])
            delta = max(delta, abs(new - mu[i]))
            total = others + new
            mu[i] = new
        # resync the running sum so rounding never accumulates across sweeps
        total = float(mu.sum())
        if delta < tol:
            return IterationTrace(sweeps, mu, delta, True)
    return IterationTrace(sweeps, mu, delta, False)


def grid_search_reward_x(aggregate_x: float, params: MarketParams, grid_points: int = 1_000_000):
    """Best reward on a uniform grid over [0, B] for a given aggregate factor."""
    if grid_points < 1000:
        raise ValidationError("grid_points must be at least 1000")
    grid = np.linspace(0.0, params.reward_cap, grid_points)
    u = utility_at_reward(grid, aggregate_x, params)
    k = int(np.argmax(u))
    return float(grid[k]), float(u[k])


def grid_search_reward(miners: Sequence[MinerProfile], params: MarketParams, grid_points: int = 1_000_000):
    lam = {m.id: m.lam for m in miners}
    x = aggregate_factor([lam[i] for i in participant_set(miners)], params)
    return grid_search_reward_x(x, params, grid_points)


def finite_difference_gradient(f: Callable[[float], float], x: float, step: float) -> float:
    return (f(x + step) - f(x - step)) / (2.0 * step)


def deviation_gain(miners: Sequence[MinerProfile], profile, reward: float, params: MarketParams,
                   grid_points: int = 1000) -> np.ndarray:
    """Largest profit gain each miner could get by changing only its own purchase.

    Deviations are scanned on ``grid_points`` values in ``[0, R N / lambda_i]``.
    """
    mu = np.asarray(profile, dtype=float)
    lam = np.array([m.lam for m in miners])
    base = miner_profits(mu, reward, params, lam)
    rn = reward * params.blocks_per_day
    total = mu.sum()
    gains = np.empty(len(mu))
    for i in range(len(mu)):
        trial = np.linspace(0.0, rn / lam[i], grid_points)
        others = total - mu[i]
        denom = others + trial
        share = np.divide(trial, denom, out=np.zeros_like(trial), where=denom > 0)
        profit = share * rn - lam[i] * trial
        gains[i] = profit.max() - base[i]
    return gains
