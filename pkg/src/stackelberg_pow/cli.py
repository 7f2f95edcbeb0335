"""Command-line entry point.

Exit status: 0 success, 1 invalid input or failed check, 2 numerical
non-convergence.  ``--json`` prints a single JSON document on stdout.
Relative ``--out`` paths resolve against ``$STACKELBERG_POW_OUTDIR`` when set.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .game import MarketParams, ValidationError, make_miners, nash_equilibrium, stackelberg_solve
from .security import AttackScenario, ConfigurationError, attacker_win_probability, simulate_attack_race
from .verify import run_checks

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NO_CONVERGENCE = 2

OUTDIR_ENV = "STACKELBERG_POW_OUTDIR"


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _scenario_overrides(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("scenario overrides (take precedence over --config)")
    g.add_argument("--n-miners", type=int, dest="n_miners")
    g.add_argument("--lambda-min", type=float, dest="lambda_min")
    g.add_argument("--spread", type=float, dest="lambda_spread_pct", help="unit price spread in percent")
    g.add_argument("--runs", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--alpha", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--reward-cap", type=float, dest="reward_cap")
    g.add_argument("--blocks-per-day", type=float, dest="blocks_per_day")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stackelberg-pow",
                                     description="Reward game between a PoW platform and hash-power buying miners.")
    parser.add_argument("--json", action="store_true", help="emit one JSON document instead of text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("attack-prob", help="probability an attacker overtakes the chain")
    p.add_argument("--h", type=float, required=True, help="attacker hash power")
    p.add_argument("--H", type=float, required=True, dest="H", help="total network hash power")
    p.add_argument("--z", type=int, required=True, help="blocks behind")
    p.add_argument("--simulate", action="store_true", help="also run the Monte Carlo race")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-cap", type=int, default=1_000_000)

    p = sub.add_parser("nash", help="miners' equilibrium at a given reward")
    p.add_argument("--lambdas", type=_floats, required=True, help="comma-separated unit prices")
    p.add_argument("--reward", type=float, required=True)
    p.add_argument("--blocks-per-day", type=float, default=MarketParams.blocks_per_day, dest="blocks_per_day")

    p = sub.add_parser("stackelberg", help="optimal reward and the miners' response")
    p.add_argument("--config", type=Path)
    p.add_argument("--lambdas", type=_floats, help="explicit unit prices instead of a random draw")
    p.add_argument("--run-index", type=int, default=0, help="which seeded draw to solve")
    _scenario_overrides(p)

    p = sub.add_parser("sweep", help="averaged parameter sweep written as CSV")
    p.add_argument("--kind", choices=("spread", "population", "price", "attack"), required=True)
    p.add_argument("--config", type=Path)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--values", type=_floats, help="swept values (network powers for --kind attack)")
    p.add_argument("--h", type=float, default=1.0, help="attacker power (attack sweep)")
    p.add_argument("--z", type=int, default=4, help="blocks behind (attack sweep)")
    _scenario_overrides(p)

    p = sub.add_parser("verify", help="cross-check closed forms against the oracles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scenarios", type=int, default=20)
    p.add_argument("--trials", type=int, default=100_000)
    return parser


def _spec(args) -> ex.ScenarioSpec:
    values = ex.parse_config(args.config.read_text(encoding="utf-8")) if args.config else {}
    for key in ex.CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return ex.spec_from_values(values)


def _emit(args, doc: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _fmt(x: float) -> str:
    return format(x, ".10g")


def _attack(args) -> int:
    scenario = AttackScenario(args.h, args.H, args.z)
    prob = attacker_win_probability(scenario)
    doc = {"attacker_power": args.h, "network_power": args.H, "depth": args.z, "probability": prob}
    lines = [f"P({args.z}) = {_fmt(prob)}"]
    if args.simulate:
        est = simulate_attack_race(scenario, args.trials, args.seed, args.step_cap)
        doc["simulation"] = {"probability": est.probability, "half_width": est.half_width,
                             "trials": est.trials, "seed": args.seed}
        lines.append(f"Monte Carlo = {_fmt(est.probability)} +/- {_fmt(est.half_width)} "
                     f"({est.trials} trials, seed {args.seed})")
    _emit(args, doc, lines)
    return EXIT_OK


def _nash(args) -> int:
    params = MarketParams(blocks_per_day=args.blocks_per_day)
    out = nash_equilibrium(make_miners(args.lambdas), args.reward, params)
    mu = [float(v) for v in out.strategies]
    doc = {"strategies": mu, "participants": list(out.participants), "q": out.q,
           "total_power": out.total_power, "aggregate_x": out.aggregate_x, "reward": out.reward}
    lines = [
        "strategies = (" + ", ".join(_fmt(v) for v in mu) + ")",
        "participants = {" + ", ".join(str(i) for i in out.participants) + "}",
        f"total_power = {_fmt(out.total_power)}",
    ]
    if out.degenerate:
        print("warning: zero reward, nobody buys power", file=sys.stderr)
    _emit(args, doc, lines)
    return EXIT_OK


def _stackelberg(args) -> int:
    spec = _spec(args)
    miners = make_miners(args.lambdas) if args.lambdas else ex.draw_miners(spec, args.run_index)
    out = stackelberg_solve(miners, spec.params)
    profits = [float(v) for v in out.miner_profits]
    doc = {
        "reward": out.reward,
        "reward_unclamped": out.reward_unclamped,
        "clamped": out.clamped,
        "degenerate": out.degenerate,
        "participants": list(out.nash.participants),
        "total_power": out.nash.total_power,
        "aggregate_x": out.aggregate_x,
        "platform_utility": out.platform_utility,
        "miner_profits": profits,
    }
    lines = [
        f"reward = {_fmt(out.reward)}" + (" (capped)" if out.clamped else ""),
        f"participants = {len(out.nash.participants)} of {len(miners)}",
        f"total_power = {_fmt(out.nash.total_power)}",
        f"platform_utility = {_fmt(out.platform_utility)}",
        f"average_profit = {_fmt(float(np.mean(profits)))}",
        "miner_profits = (" + ", ".join(_fmt(v) for v in profits) + ")",
    ]
    if out.degenerate:
        print("warning: degenerate equilibrium, alpha*beta*X <= 4 so the optimal reward is 0 "
              "and no miner participates", file=sys.stderr)
    _emit(args, doc, lines)
    return EXIT_OK


def _out_path(path: Path) -> Path:
    base = os.environ.get(OUTDIR_ENV)
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def _sweep(args) -> int:
    if args.kind == "attack":
        powers = args.values or ex.DEFAULT_NETWORK_POWERS
        points = ex.attack_curve(args.h, args.z, powers)
        text = ex.attack_csv(points)
        rows = [{"network_power": h, "attack_probability": p} for h, p in points]
    else:
        spec = _spec(args)
        sweep, default = {
            "spread": (ex.sweep_price_spread, ex.DEFAULT_SPREADS),
            "population": (ex.sweep_population, ex.DEFAULT_POPULATIONS),
            "price": (ex.sweep_unit_price, ex.DEFAULT_LAMBDA_MINS),
        }[args.kind]
        result = sweep(args.values or default, spec)
        text = ex.sweep_csv(result)
        rows = [r.as_record() for r in result]
    path = ex.write_csv(text, _out_path(args.out))
    _emit(args, {"kind": args.kind, "out": str(path), "rows": rows},
          [f"wrote {len(rows)} rows to {path}"])
    return EXIT_OK


def _verify(args) -> int:
    results = run_checks(args.seed, args.scenarios, args.trials)
    doc = {"checks": [{"name": r.name, "passed": r.passed, "detail": r.detail, "converged": r.converged}
                      for r in results]}
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}" for r in results]
    _emit(args, doc, lines)
    if not all(r.converged for r in results):
        return EXIT_NO_CONVERGENCE
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVALID


_COMMANDS = {
    "attack-prob": _attack,
    "nash": _nash,
    "stackelberg": _stackelberg,
    "sweep": _sweep,
    "verify": _verify,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse signals usage errors with 2, which is reserved for non-convergence here
        return EXIT_INVALID if exc.code == 2 else int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ValidationError, ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
