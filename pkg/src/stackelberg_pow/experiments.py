"""Seeded parameter sweeps over random miner markets, written out as CSV.

Each scenario draws ``n_miners`` unit prices uniformly from
``[lambda_min, lambda_min * (1 + spread/100)]``, solves the game, and
averages the results over ``runs`` independent draws.  Run ``k`` of a
scenario always uses the stream seeded by ``(seed, k)``.
"""
from __future__ import annotations

import csv
import dataclasses
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .game import MarketParams, MinerProfile, ValidationError, make_miners, stackelberg_solve
from .security import AttackScenario, attacker_win_probability

CSV_COLUMNS = (
    "swept_param", "value", "participation", "reward_star", "total_power",
    "platform_utility", "avg_profit", "profit_rank1", "profit_rank50", "profit_rank100",
)
ATTACK_COLUMNS = ("network_power", "attack_probability")
PROFIT_RANKS = (1, 50, 100)

DEFAULT_SPREADS = (1.0, 2.0, 3.0, 4.0, 5.0)
DEFAULT_POPULATIONS = (500, 1000, 2000, 3000, 4000, 5000)
DEFAULT_LAMBDA_MINS = tuple(float(v) for v in range(100, 201, 10))
DEFAULT_NETWORK_POWERS = tuple(float(v) for v in range(3, 41))


@dataclass(frozen=True)
class ScenarioSpec:
    n_miners: int = 1000
    lambda_min: float = 100.0
    lambda_spread_pct: float = 5.0
    params: MarketParams = field(default_factory=MarketParams)
    runs: int = 100
    seed: int = 42

    def __post_init__(self):
        if self.n_miners < 2:
            raise ValidationError("n_miners must be at least 2")
        if not self.lambda_min > 0:
            raise ValidationError("lambda_min must be positive")
        if self.lambda_spread_pct < 0:
            raise ValidationError("lambda_spread_pct must be non-negative")
        if self.runs < 1:
            raise ValidationError("runs must be at least 1")

    def replace(self, **changes) -> "ScenarioSpec":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class SweepRow:
    swept_param: str
    value: float
    participation: float
    reward_star: float
    total_power: float
    platform_utility: float
    avg_profit: float
    profit_rank1: float | None
    profit_rank50: float | None
    profit_rank100: float | None

    def as_record(self) -> dict:
        return dataclasses.asdict(self)


def draw_miners(spec: ScenarioSpec, run_index: int) -> list[MinerProfile]:
    rng = np.random.default_rng([spec.seed, run_index])
    hi = spec.lambda_min * (1.0 + spec.lambda_spread_pct / 100.0)
    if hi == spec.lambda_min:
        return make_miners(np.full(spec.n_miners, spec.lambda_min))
    return make_miners(rng.uniform(spec.lambda_min, hi, spec.n_miners))


def run_scenario(spec: ScenarioSpec, swept_param: str = "", value: float = float("nan")) -> SweepRow:
    """Solve ``spec.runs`` independent markets and average their outcomes."""
    n = spec.n_miners
    participation = reward = total = utility = avg_profit = 0.0
    rank_sums = {k: 0.0 for k in PROFIT_RANKS}
    for run in range(spec.runs):
        miners = draw_miners(spec, run)
        out = stackelberg_solve(miners, spec.params)
        participation += len(out.nash.participants) / n
        reward += out.reward
        total += out.nash.total_power
        utility += out.platform_utility
        avg_profit += float(out.miner_profits.mean())
        lam = np.array([m.lam for m in miners])
        ranked = out.miner_profits[np.argsort(lam, kind="stable")]
        for k in PROFIT_RANKS:
            if k <= n:
                rank_sums[k] += float(ranked[k - 1])
    runs = spec.runs
    ranks = {k: (rank_sums[k] / runs if k <= n else None) for k in PROFIT_RANKS}
    return SweepRow(
        swept_param=swept_param,
        value=float(value),
        participation=participation / runs,
        reward_star=reward / runs,
        total_power=total / runs,
        platform_utility=utility / runs,
        avg_profit=avg_profit / runs,
        profit_rank1=ranks[1],
        profit_rank50=ranks[50],
        profit_rank100=ranks[100],
    )


def sweep_price_spread(spreads: Iterable[float] = DEFAULT_SPREADS,
                       spec: ScenarioSpec | None = None) -> list[SweepRow]:
    spec = spec or ScenarioSpec()
    return [run_scenario(spec.replace(lambda_spread_pct=float(s)), "spread", s) for s in spreads]


def sweep_population(populations: Iterable[int] = DEFAULT_POPULATIONS,
                     spec: ScenarioSpec | None = None) -> list[SweepRow]:
    spec = spec or ScenarioSpec()
    return [run_scenario(spec.replace(n_miners=int(n)), "population", n) for n in populations]


def sweep_unit_price(lambda_mins: Iterable[float] = DEFAULT_LAMBDA_MINS,
                     spec: ScenarioSpec | None = None) -> list[SweepRow]:
    spec = spec or ScenarioSpec()
    return [run_scenario(spec.replace(lambda_min=float(v)), "lambda_min", v) for v in lambda_mins]


def attack_curve(attacker_power: float, depth: int,
                 network_powers: Iterable[float] = DEFAULT_NETWORK_POWERS) -> list[tuple[float, float]]:
    """Attack success probability along a range of total network powers."""
    return [(float(h), attacker_win_probability(AttackScenario(attacker_power, float(h), depth)))
            for h in network_powers]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return format(float(x), ".10g")


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        rec = row.as_record()
        writer.writerow([_fmt(rec[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def attack_csv(points: Sequence[tuple[float, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ATTACK_COLUMNS)
    for h, p in points:
        writer.writerow([_fmt(h), _fmt(p)])
    return buf.getvalue()


def write_csv(text: str, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


# --- scenario config files --------------------------------------------------

_SPEC_KEYS = {"n_miners": int, "lambda_min": float, "lambda_spread_pct": float, "runs": int, "seed": int}
_PARAM_KEYS = {"alpha": float, "beta": float, "reward_cap": float, "blocks_per_day": float}
CONFIG_KEYS = tuple(_SPEC_KEYS) + tuple(_PARAM_KEYS)


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment.  Unknown keys are errors."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        kind = _SPEC_KEYS.get(key) or _PARAM_KEYS.get(key)
        if kind is None:
            raise ValidationError(f"config line {lineno}: unknown key {key!r}")
        if key in values:
            raise ValidationError(f"config line {lineno}: duplicate key {key!r}")
        try:
            values[key] = kind(val)
        except ValueError:
            raise ValidationError(f"config line {lineno}: bad value for {key}: {val!r}") from None
    return values


def spec_from_values(values: dict, base: ScenarioSpec | None = None) -> ScenarioSpec:
    base = base or ScenarioSpec()
    unknown = set(values) - set(CONFIG_KEYS)
    if unknown:
        raise ValidationError(f"unknown scenario keys: {sorted(unknown)}")
    params = dataclasses.replace(base.params, **{k: v for k, v in values.items() if k in _PARAM_KEYS})
    return dataclasses.replace(base, params=params, **{k: v for k, v in values.items() if k in _SPEC_KEYS})


def load_config(path) -> ScenarioSpec:
    return spec_from_values(parse_config(Path(path).read_text(encoding="utf-8")))
