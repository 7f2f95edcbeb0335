"""Double-spend risk for a proof-of-work chain.

An attacker with hash power ``h`` out of a network total ``H`` tries to
replace a block buried ``z`` confirmations deep.  The closed-form success
probability is a regularized incomplete beta function of ``4pq``; the
Monte Carlo race below re-derives it by playing the race block by block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .game import ValidationError

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 10_000
_SERIES_X = 1e-3

# trials per independent RNG stream
_BLOCK = 1 << 16
# a walker this deep in deficit returns with probability below this
_ABANDON_PROB = 1e-13


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class AttackScenario:
    attacker_power: float
    network_power: float
    depth: int

    def __post_init__(self):
        if not self.network_power > 0:
            raise ValidationError("network_power must be positive")
        if not 0 <= self.attacker_power <= self.network_power:
            raise ValidationError("attacker_power must lie in [0, network_power]")
        if int(self.depth) != self.depth or self.depth < 0:
            raise ValidationError("depth must be a non-negative integer")

    @property
    def q(self) -> float:
        """Chance the attacker finds the next block."""
        return self.attacker_power / self.network_power

    @property
    def p(self) -> float:
        return (self.network_power - self.attacker_power) / self.network_power


def _betacf(x: float, a: float, b: float) -> float:
    """Continued fraction for I_x(a, b), modified Lentz evaluation."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def _log_prefactor(x: float, a: float, b: float) -> float:
    return (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
            + a * math.log(x) + b * math.log1p(-x))


def _beta_series(x: float, a: float, b: float) -> float:
    # I_x(a,b) = x^a (1-x)^b Γ(a+b)/(Γ(a)Γ(b)) / a * Σ_n (a+b)_n / (a+1)_n x^n
    term = 1.0
    total = 1.0
    n = 0
    while abs(term) > _CF_EPS * abs(total):
        term *= (a + b + n) / (a + 1.0 + n) * x
        total += term
        n += 1
        if n > _CF_MAX_ITER:
            raise ArithmeticError("incomplete beta series did not converge")
    return math.exp(_log_prefactor(x, a, b)) * total / a


def regularized_incomplete_beta(x: float, u: float, v: float) -> float:
    """I_x(u, v): the Beta(u, v) distribution function evaluated at ``x``."""
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"x must lie in [0, 1], got {x}")
    if not (u > 0 and v > 0):
        raise ValidationError(f"shape parameters must be positive, got u={u}, v={v}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    if x < _SERIES_X:
        return _beta_series(x, u, v)
    if x < (u + 1.0) / (u + v + 2.0):
        return math.exp(_log_prefactor(x, u, v)) * _betacf(x, u, v) / u
    return 1.0 - math.exp(_log_prefactor(1.0 - x, v, u)) * _betacf(1.0 - x, v, u) / v


def attacker_win_probability(scenario: AttackScenario) -> float:
    """Chance the attacker ever overtakes the honest chain from ``depth`` behind.

    Certain when the attacker holds at least half the power, or when there
    is nothing to catch up (``depth == 0``).
    """
    q = scenario.q
    if q >= 0.5 or scenario.depth == 0:
        return 1.0
    return regularized_incomplete_beta(4.0 * scenario.p * q, float(scenario.depth), 0.5)


@dataclass(frozen=True)
class RaceEstimate:
    probability: float
    half_width: float
    successes: int
    trials: int

    @property
    def interval(self) -> tuple[float, float]:
        return self.probability - self.half_width, self.probability + self.half_width

    def covers(self, value: float) -> bool:
        lo, hi = self.interval
        return lo <= value <= hi


@numba.njit(cache=True)
def _race_block(rng, q, z, trials, step_cap, abandon):
    wins = 0
    for _ in range(trials):
        honest = 0
        attacker = 0
        steps = 0
        # the merchant waits for z honest confirmations while the attacker mines in secret
        while honest < z and steps < step_cap:
            if rng.random() < q:
                attacker += 1
            else:
                honest += 1
            steps += 1
        if honest < z:
            continue
        deficit = honest - attacker
        while deficit > 0 and deficit < abandon and steps < step_cap:
            if rng.random() < q:
                deficit -= 1
            else:
                deficit += 1
            steps += 1
        if deficit <= 0:
            wins += 1
    return wins


def _abandon_deficit(q: float) -> int:
    if q <= 0.0:
        return 1
    if q >= 0.5:
        return np.iinfo(np.int64).max
    return int(math.ceil(math.log(_ABANDON_PROB) / math.log(q / (1.0 - q))))


def simulate_attack_race(scenario: AttackScenario, trials: int, seed: int,
                         step_cap: int = 1_000_000) -> RaceEstimate:
    """Monte Carlo estimate of the attacker's success probability.

    Each trial mines blocks one at a time (attacker with probability ``q``)
    until the honest chain has ``depth`` confirmations, then follows the
    attacker's deficit until it closes (success) or ``step_cap`` blocks have
    been mined in total (failure).  Walkers drifting so far behind that a
    comeback has probability under 1e-13 are scored as failures early.

    Trials are split into blocks of 65536, each with its own stream seeded
    by ``(seed, block index)``; the result does not depend on evaluation order.
    """
    if trials < 1:
        raise ConfigurationError("trials must be at least 1")
    if step_cap < scenario.depth:
        raise ConfigurationError("step_cap must be at least the depth")
    z = int(scenario.depth)
    if z == 0:
        return RaceEstimate(1.0, 0.0, trials, trials)
    q = scenario.q
    abandon = _abandon_deficit(q)
    wins = 0
    for block, start in enumerate(range(0, trials, _BLOCK)):
        count = min(_BLOCK, trials - start)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))
        wins += int(_race_block(rng, q, z, count, step_cap, abandon))
    p_hat = wins / trials
    half = 1.959963984540054 * math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return RaceEstimate(p_hat, half, wins, trials)


def min_network_power(attacker_power: float, depth: int, target_risk: float,
                      bracket_max: float, rtol: float = 1e-9) -> float | None:
    """Smallest total network power keeping the attack success at or below ``target_risk``.

    Bisects on ``H`` over ``(2h, bracket_max]``.  Returns ``None`` when even
    ``bracket_max`` leaves the risk above target.
    """
    if not 0 < target_risk <= 1:
        raise ValidationError("target_risk must lie in (0, 1]")
    if not attacker_power > 0:
        raise ValidationError("attacker_power must be positive")
    lo = 2.0 * attacker_power
    if not bracket_max > lo:
        raise ValidationError("bracket_max must exceed twice the attacker power")

    def risk(h_total: float) -> float:
        return attacker_win_probability(AttackScenario(attacker_power, h_total, depth))

    if risk(bracket_max) > target_risk:
        return None
    if target_risk >= 1.0:
        return lo
    hi = bracket_max
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if risk(mid) <= target_risk:
            hi = mid
        else:
            lo = mid
    return hi

