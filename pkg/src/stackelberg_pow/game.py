"""Two-stage reward game between a PoW platform and miners that rent hash power.

The platform (leader) posts a per-block reward ``R``; each miner (follower)
buys hash power ``mu_i`` at its own unit price ``lambda_i`` and wins a block
with probability proportional to its share of the total power.  Everything
here is closed form: the miners' Nash equilibrium is built by growing the
participant set over the cheapest miners, and the platform's optimal reward
comes from the stationary point of a sigmoid utility.

Strategy profiles are plain ``numpy`` float arrays indexed by miner id.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import expit

# relative tolerance for algebraic identities (sums, closed-form cross checks)
IDENTITY_RTOL = 1e-9
# relative tolerance for derivative checks against finite differences
DERIVATIVE_RTOL = 1e-6


class ValidationError(ValueError):
    """Raised when an input violates a model precondition."""


class UndefinedRatioError(ArithmeticError):
    """Raised when a winning probability is requested for an all-zero profile."""


@dataclass(frozen=True)
class MinerProfile:
    id: int
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValidationError(f"miner {self.id}: unit price must be positive and finite, got {self.lam}")


@dataclass(frozen=True)
class MarketParams:
    """Platform-side constants.

    Defaults are the evaluation settings: 1000-miner market, 10 minute blocks.
    """

    alpha: float = 10000.0
    beta: float = 0.001
    reward_cap: float = 2000.0
    blocks_per_day: float = 144.0

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValidationError(f"alpha must exceed 1, got {self.alpha}")
        if not 0 < self.beta < 1:
            raise ValidationError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.reward_cap > 0:
            raise ValidationError(f"reward_cap must be positive, got {self.reward_cap}")
        if not self.blocks_per_day > 0:
            raise ValidationError(f"blocks_per_day must be positive, got {self.blocks_per_day}")


@dataclass(frozen=True)
class NashOutcome:
    """Miners' equilibrium at a fixed reward.

    ``participants`` lists the ids with positive strategy in admission order
    (ascending unit price).  For a zero reward the outcome is degenerate:
    nobody participates and ``aggregate_x`` is 0.
    """

    strategies: np.ndarray
    participants: tuple[int, ...]
    q: int
    total_power: float
    aggregate_x: float
    reward: float

    @property
    def degenerate(self) -> bool:
        return self.q == 0


@dataclass(frozen=True)
class StackelbergOutcome:
    reward: float
    reward_unclamped: float
    aggregate_x: float
    nash: NashOutcome
    platform_utility: float
    miner_profits: np.ndarray
    miners: tuple[MinerProfile, ...] = field(repr=False, default=())

    @property
    def degenerate(self) -> bool:
        return self.reward == 0.0

    @property
    def clamped(self) -> bool:
        return self.reward_unclamped > self.reward


def make_miners(lambdas: Sequence[float]) -> list[MinerProfile]:
    """Wrap a sequence of unit prices as miners with ids 0..n-1."""
    return [MinerProfile(i, float(lam)) for i, lam in enumerate(lambdas)]


def _lambdas(miners: Sequence[MinerProfile]) -> np.ndarray:
    ids = [m.id for m in miners]
    if len(set(ids)) != len(ids):
        raise ValidationError("miner ids must be unique")
    return np.array([m.lam for m in miners], dtype=float)


def win_probability(i: int, strategies) -> float:
    mu = np.asarray(strategies, dtype=float)
    total = mu.sum()
    if total <= 0:
        raise UndefinedRatioError("win probability undefined: every strategy is zero")
    return float(mu[i] / total)


def miner_profit(i: int, strategies, reward: float, params: MarketParams, lambda_i: float) -> float:
    """Expected daily profit ``p_i R N - lambda_i mu_i`` of miner ``i``."""
    if reward < 0:
        raise ValidationError("reward must be non-negative")
    mu = np.asarray(strategies, dtype=float)
    p = win_probability(i, mu)
    return p * reward * params.blocks_per_day - lambda_i * mu[i]


def miner_profits(strategies, reward: float, params: MarketParams, lambdas) -> np.ndarray:
    """Vector of all miners' profits; an all-zero profile earns everyone 0."""
    mu = np.asarray(strategies, dtype=float)
    lam = np.asarray(lambdas, dtype=float)
    total = mu.sum()
    if total <= 0:
        return np.zeros_like(mu)
    return mu / total * reward * params.blocks_per_day - lam * mu


def miner_profit_gradient(mu_i: float, others_total: float, reward: float,
                          params: MarketParams, lambda_i: float) -> float:
    """d profit / d mu_i, holding the other miners fixed."""
    total = mu_i + others_total
    return reward * params.blocks_per_day * others_total / total**2 - lambda_i


def miner_profit_curvature(mu_i: float, others_total: float, reward: float,
                           params: MarketParams) -> float:
    total = mu_i + others_total
    return -2.0 * reward * params.blocks_per_day * others_total / total**3


def platform_utility(total_power: float, reward: float, params: MarketParams) -> float:
    """``alpha * (sigmoid(beta * total_power) - 1/2) - R``.

    ``expit`` saturates cleanly, so very large ``total_power`` is safe.
    """
    if total_power < 0:
        raise ValidationError("total_power must be non-negative")
    if not 0 <= reward <= params.reward_cap:
        raise ValidationError(f"reward must lie in [0, {params.reward_cap}], got {reward}")
    return params.alpha * (float(expit(params.beta * total_power)) - 0.5) - reward


def utility_at_reward(reward, aggregate_x: float, params: MarketParams):
    """Platform utility as a function of reward once the miners have reacted.

    Vectorised over ``reward``; no cap check, so oracles can scan past ``B``.
    """
    r = np.asarray(reward, dtype=float)
    u = params.alpha * (expit(params.beta * aggregate_x * r) - 0.5) - r
    return float(u) if np.ndim(u) == 0 else u


def utility_gradient(reward: float, aggregate_x: float, params: MarketParams) -> float:
    k = params.beta * aggregate_x
    s = float(expit(k * reward))
    return params.alpha * k * s * (1.0 - s) - 1.0


def utility_curvature(reward: float, aggregate_x: float, params: MarketParams) -> float:
    k = params.beta * aggregate_x
    s = float(expit(k * reward))
    return params.alpha * k * k * s * (1.0 - s) * (1.0 - 2.0 * s)


def best_response(lambda_i: float, others_total: float, reward: float, params: MarketParams) -> float:
    """Profit-maximising purchase given the others' total power.

    Zero whenever ``R N / others_total <= lambda_i``.  A lone miner has no
    best response (it would shrink its purchase towards zero forever), so
    ``others_total == 0`` is rejected.
    """
    if others_total <= 0:
        raise ValidationError("best response undefined with no competing power: "
                              "a single-miner market has no equilibrium")
    if reward < 0:
        raise ValidationError("reward must be non-negative")
    rn = reward * params.blocks_per_day
    if rn / others_total <= lambda_i:
        return 0.0
    return max(math.sqrt(rn * others_total / lambda_i) - others_total, 0.0)


def _admission(lam: np.ndarray) -> tuple[np.ndarray, int, float]:
    """Stable λ-ascending order, participant count and their price sum."""
    if lam.size < 2:
        raise ValidationError("at least two miners are required for an equilibrium")
    if not np.all(np.isfinite(lam)) or np.any(lam <= 0):
        raise ValidationError("unit prices must be positive and finite")
    order = np.argsort(lam, kind="stable")
    ordered = lam[order]
    n = ordered.size
    q = 2
    price_sum = ordered[0] + ordered[1]
    # strict: a miner exactly at the threshold would buy nothing
    while q < n and ordered[q] < price_sum / (q - 1):
        price_sum += ordered[q]
        q += 1
    return order, q, price_sum


def participant_set(miners: Sequence[MinerProfile]) -> tuple[int, ...]:
    """Ids of miners who buy power at any positive reward."""
    lam = _lambdas(miners)
    order, q, _ = _admission(lam)
    return tuple(miners[j].id for j in order[:q])


def aggregate_factor(subset_lambdas, params: MarketParams) -> float:
    """Ratio of equilibrium total power to reward, ``N (q-1) / sum(lambda)``.

    Depends only on the participants' prices, never on the reward.
    """
    lam = np.asarray(subset_lambdas, dtype=float)
    if lam.size < 2:
        raise ValidationError("aggregate factor needs at least two participants")
    return params.blocks_per_day * (lam.size - 1) / float(lam.sum())


def nash_equilibrium(miners: Sequence[MinerProfile], reward: float, params: MarketParams) -> NashOutcome:
    if reward < 0:
        raise ValidationError("reward must be non-negative")
    lam = _lambdas(miners)
    order, q, price_sum = _admission(lam)
    n = lam.size
    if reward == 0:
        return NashOutcome(np.zeros(n), (), 0, 0.0, 0.0, 0.0)

    members = order[:q]
    total = reward * params.blocks_per_day * (q - 1) / price_sum
    mu = np.zeros(n)
    mu[members] = total * (1.0 - (q - 1) * lam[members] / price_sum)
    x = params.blocks_per_day * (q - 1) / price_sum
    return NashOutcome(
        strategies=mu,
        participants=tuple(miners[j].id for j in members),
        q=q,
        total_power=float(total),
        aggregate_x=float(x),
        reward=float(reward),
    )


def interior_reward(aggregate_x: float, params: MarketParams) -> float:
    """Stationary point of the platform utility, ignoring the cap ``B``.

    Returns 0 when ``alpha * beta * X <= 4`` (utility is then decreasing).
    """
    if not aggregate_x > 0:
        raise ValidationError("aggregate factor must be positive")
    k = params.beta * aggregate_x
    abx = params.alpha * k
    if abx <= 4:
        return 0.0
    s = math.sqrt(0.25 - 1.0 / abx)
    # log((1/2 + s) / (1/2 - s)) == 2 atanh(2s); atanh keeps precision as s -> 1/2
    return 2.0 * math.atanh(2.0 * s) / k


def optimal_reward(aggregate_x: float, params: MarketParams) -> float:
    return min(interior_reward(aggregate_x, params), params.reward_cap)


def stackelberg_solve(miners: Sequence[MinerProfile], params: MarketParams) -> StackelbergOutcome:
    lam = _lambdas(miners)
    order, q, price_sum = _admission(lam)
    x = params.blocks_per_day * (q - 1) / price_sum
    r_free = interior_reward(x, params)
    r_star = min(r_free, params.reward_cap)
    nash = nash_equilibrium(miners, r_star, params)
    utility = 0.0 if r_star == 0 else float(utility_at_reward(r_star, x, params))
    profits = miner_profits(nash.strategies, r_star, params, lam)
    return StackelbergOutcome(
        reward=float(r_star),
        reward_unclamped=float(r_free),
        aggregate_x=float(x),
        nash=nash,
        platform_utility=utility,
        miner_profits=profits,
        miners=tuple(miners),
    )
