"""Reward-setting game between a proof-of-work platform and miners renting hash power.

The platform picks a per-block reward; miners with heterogeneous unit
prices for hash power respond with a unique Nash equilibrium.  The total
power they buy sets the chain's resistance to double-spend attacks.
"""
from .game import (
    MarketParams,
    MinerProfile,
    NashOutcome,
    StackelbergOutcome,
    UndefinedRatioError,
    ValidationError,
    aggregate_factor,
    best_response,
    make_miners,
    miner_profit,
    nash_equilibrium,
    optimal_reward,
    participant_set,
    platform_utility,
    stackelberg_solve,
    win_probability,
)
from .security import (
    AttackScenario,
    ConfigurationError,
    RaceEstimate,
    attacker_win_probability,
    min_network_power,
    regularized_incomplete_beta,
    simulate_attack_race,
)
from .experiments import ScenarioSpec, SweepRow, attack_curve, draw_miners

__all__ = [
    "AttackScenario",
    "ConfigurationError",
    "MarketParams",
    "MinerProfile",
    "NashOutcome",
    "RaceEstimate",
    "ScenarioSpec",
    "StackelbergOutcome",
    "SweepRow",
    "UndefinedRatioError",
    "ValidationError",
    "aggregate_factor",
    "attack_curve",
    "attacker_win_probability",
    "best_response",
    "draw_miners",
    "make_miners",
    "miner_profit",
    "min_network_power",
    "nash_equilibrium",
    "optimal_reward",
    "participant_set",
    "platform_utility",
    "regularized_incomplete_beta",
    "simulate_attack_race",
    "stackelberg_solve",
    "win_probability",
]
