"""Miniature versions of the evaluation sweeps.

Runs are fewer than the defaults so the script finishes in seconds; pass the
CSV text to your plotting tool of choice.
"""
from stackelberg_pow.experiments import ScenarioSpec, sweep_csv, sweep_population, sweep_price_spread, sweep_unit_price

spec = ScenarioSpec(runs=10)

print("participation falls as prices spread out:")
for row in sweep_price_spread(spec=spec):
    print(f"  spread {row.value:g}%: {row.participation:.3f}")

print("\nreward rises until the cap as miners get pricier:")
for row in sweep_unit_price([100, 120, 140, 160], spec):
    print(f"  lambda_min {row.value:g}: R* = {row.reward_star:.1f}, utility {row.platform_utility:.1f}")

print("\nCSV for the population sweep:")
print(sweep_csv(sweep_population([500, 1000, 2000], spec)), end="")
