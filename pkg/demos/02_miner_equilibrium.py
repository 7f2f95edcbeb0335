"""Which miners bother to buy hash power, and how much?

Five miners face different unit prices.  The closed-form equilibrium admits
only the cheapest few; a damped best-response iteration started elsewhere
lands on the same profile.
"""
import numpy as np

from stackelberg_pow.game import MarketParams, make_miners, miner_profits, nash_equilibrium
from stackelberg_pow.oracles import best_response_iteration

params = MarketParams()
miners = make_miners([100.0, 101.0, 102.5, 104.0, 180.0])
reward = 500.0

ne = nash_equilibrium(miners, reward, params)
profits = miner_profits(ne.strategies, reward, params, [m.lam for m in miners])
print(f"participants: {ne.participants} (q = {ne.q})")
for m, mu, pi in zip(miners, ne.strategies, profits):
    print(f"  miner {m.id}: price {m.lam:6.1f}  buys {mu:9.3f}  profit {pi:9.3f}")

trace = best_response_iteration(miners, reward, params)
gap = np.abs(trace.final_profile - ne.strategies).max()
print(f"\nbest-response iteration: {trace.iterations} sweeps, converged={trace.converged}, max gap {gap:.2e}")

# total power scales linearly with the reward; the participant set does not move
for r in (100.0, 1000.0):
    out = nash_equilibrium(miners, r, params)
    print(f"R = {r:6.0f}: total power {out.total_power:10.3f}, participants {out.participants}")
