"""Choosing the block reward.

The platform trades security (a sigmoid of total power) against what it
pays.  We solve for the optimal reward, compare it with a brute-force scan,
and show the degenerate market where paying nothing is best.
"""
from stackelberg_pow.game import MarketParams, make_miners, stackelberg_solve
from stackelberg_pow.oracles import grid_search_reward

miners = make_miners([100.0, 101.0, 102.5, 104.0, 180.0])

for params in (MarketParams(), MarketParams(reward_cap=1e5), MarketParams(alpha=2.0)):
    out = stackelberg_solve(miners, params)
    r_grid, _ = grid_search_reward(miners, params, grid_points=100_000)
    note = "degenerate" if out.degenerate else ("capped" if out.clamped else "interior")
    print(f"alpha={params.alpha:g} B={params.reward_cap:g}: R* = {out.reward:.4f} ({note}), "
          f"grid {r_grid:.4f}, utility {out.platform_utility:.3f}")
