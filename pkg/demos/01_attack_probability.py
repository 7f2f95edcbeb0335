"""How fast does a double-spend attack become hopeless as the honest network grows?

An attacker with 1 TH/s tries to rewrite a transaction buried under four
blocks.  We print the analytic success probability for a range of total
network powers, check one point against a seeded Monte Carlo race, and ask
how much power the network needs for a given risk level.
"""
from stackelberg_pow import AttackScenario, attacker_win_probability, min_network_power, simulate_attack_race

ATTACKER = 1.0
DEPTH = 4

print("network power  P(attacker wins)")
for total in (3, 5, 10, 20, 40):
    p = attacker_win_probability(AttackScenario(ATTACKER, total, DEPTH))
    print(f"{total:>13}  {p:.6g}")

scenario = AttackScenario(ATTACKER, 10, DEPTH)
est = simulate_attack_race(scenario, trials=1_000_000, seed=1)
lo, hi = est.interval
print(f"\nMonte Carlo at H=10: {est.probability:.6g}, 95% interval [{lo:.6g}, {hi:.6g}]")
print(f"analytic value inside the interval: {est.covers(attacker_win_probability(scenario))}")

for risk in (1e-2, 1e-3, 1e-4):
    need = min_network_power(ATTACKER, DEPTH, risk, bracket_max=1e4)
    print(f"risk <= {risk:g} needs total power >= {need:.4g}")
