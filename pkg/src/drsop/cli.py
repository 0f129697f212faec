"""Solve, benchmark and verify service placements from the command line.

Exit codes: 0 success / stable, 1 usage or input error, 2 no stable solution.
Paths starting with ``@`` name bundled fixtures (``@standard``,
``@standard-augmented``, ``@standard-ladder``).
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .bench import DEFAULT_CANDIDATES_PER_MS, BenchPlan, run_one, run_plan
from .exceptions import DrsopError
from .io import (
    fixture_path, format_assignment, parse_assignment, parse_instance, parse_scenarios,
    write_report,
)
from .model import (
    check_assignment, initial_assignment, is_stable, overloaded_resources, transformation_cost,
)
from .search import STRATEGY_IDS, StrategyParams, exhaustive_minimum
from .validation import check_enabled_nodes

EXIT_OK, EXIT_INPUT, EXIT_UNSTABLE = 0, 1, 2

# flag -> StrategyParams field
PARAM_FLAGS = {
    "--tabu-dull-limit": ("tabu_dull_move_limit", int),
    "--sa-initial-temperature": ("sa_initial_temperature", float),
    "--sa-cooling": ("sa_cooling_factor", float),
    "--sa-steps": ("sa_steps_per_temperature", int),
    "--sa-min-temperature": ("sa_min_temperature", float),
    "--ga-population": ("ga_population", int),
    "--ga-generations-cap": ("ga_generations_cap", int),
    "--ga-mutation-rate": ("ga_mutation_rate", float),
    "--ga-tournament-size": ("ga_tournament_size", int),
    "--sga-seed-fraction": ("sga_seed_fraction", float),
    "--sga-seeding-share": ("sga_seeding_share", float),
}


def _read_text(ref: str) -> str:
    if ref.startswith("@"):
        return fixture_path(ref[1:]).read_text(encoding="utf-8")
    try:
        return Path(ref).read_text(encoding="utf-8")
    except OSError as exc:
        raise DrsopError(f"cannot read {ref}: {exc.strerror}") from None


def _service_range(text: str) -> tuple:
    lo, sep, hi = text.partition("..")
    try:
        lo, hi = int(lo), int(hi) if sep else int(lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected FIRST..LAST, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("empty service range")
    return lo, hi


def _node_list(text: str) -> list:
    return [n for n in text.replace(",", " ").split() if n]


def _select(space, services, nodes):
    if services is not None:
        lo, hi = services
        ids = [s for s in space.service_ids if s.isdigit() and lo <= int(s) <= hi]
        if len(ids) != hi - lo + 1:
            raise DrsopError(f"instance lacks some services in {lo}..{hi}")
        space = space.restrict(services=ids)
    if nodes is not None:
        space = space.restrict(nodes=check_enabled_nodes(space, nodes))
    return space


def _params(args) -> StrategyParams:
    overrides = {}
    for flag, (name, _) in PARAM_FLAGS.items():
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    return StrategyParams(**overrides)


def _add_instance_args(p, selection=True):
    p.add_argument("--instance", required=True, help="instance file or @fixture")
    if selection:
        p.add_argument("--services", type=_service_range, help="deployed services FIRST..LAST")
        p.add_argument("--nodes", type=_node_list, help="enabled nodes, e.g. A,B,C,D")


def _add_param_args(p):
    g = p.add_argument_group("strategy parameters")
    for flag, (name, typ) in PARAM_FLAGS.items():
        g.add_argument(flag, dest=name, type=typ)
    g.add_argument("--candidates-per-ms", type=float, default=DEFAULT_CANDIDATES_PER_MS,
                   help="work budget per budget millisecond; 0 = wall clock only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drsop", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one strategy")
    _add_instance_args(p)
    p.add_argument("--strategy", required=True, help=" | ".join(STRATEGY_IDS))
    p.add_argument("--budget-ms", type=int, default=30_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--scenario-name", default="cli")
    p.add_argument("--out", help="write the best assignment here")
    _add_param_args(p)

    p = sub.add_parser("bench", help="run a scenario file")
    _add_instance_args(p, selection=False)
    p.add_argument("--scenarios", required=True, help="scenario file or @fixture")
    p.add_argument("--budget-scale", type=float, default=1.0)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--seeds", type=_node_list, help="override every scenario's seeds")
    p.add_argument("--out", help="CSV destination (default: stdout)")
    _add_param_args(p)

    p = sub.add_parser("verify", help="recheck an assignment file")
    _add_instance_args(p)
    p.add_argument("--assignment", required=True)

    p = sub.add_parser("oracle", help="exhaustive minimum by enumeration")
    _add_instance_args(p)
    p.add_argument("--max-services", type=int, default=10)
    return parser


def cmd_solve(args) -> int:
    space = _select(parse_instance(_read_text(args.instance)), args.services, args.nodes)
    if args.strategy not in STRATEGY_IDS:
        raise DrsopError(f"unknown strategy {args.strategy!r}")
    if args.budget_ms <= 0:
        raise DrsopError("--budget-ms must be positive")
    rate = args.candidates_per_ms or None
    report, outcome = run_one(space, args.scenario_name, args.strategy, args.seed,
                              args.budget_ms, _params(args), rate)
    sys.stdout.write(write_report([report]))
    if args.out and outcome.best is not None:
        Path(args.out).write_text(format_assignment(outcome.best), encoding="utf-8")
    return EXIT_OK if outcome.stable_found else EXIT_UNSTABLE


def cmd_bench(args) -> int:
    instance = parse_instance(_read_text(args.instance))
    scenarios = parse_scenarios(_read_text(args.scenarios))
    if args.seeds:
        try:
            seeds = tuple(int(s) for s in args.seeds)
        except ValueError:
            raise DrsopError("--seeds expects integers") from None
        scenarios = [replace(sc, seeds=seeds) for sc in scenarios]
    plan = BenchPlan(instance, scenarios, args.budget_scale, args.parallel, _params(args),
                     args.candidates_per_ms or None)
    csv_text = run_plan(plan)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_verify(args) -> int:
    space = _select(parse_instance(_read_text(args.instance)), args.services, args.nodes)
    mu = parse_assignment(_read_text(args.assignment))
    check_assignment(space, mu)
    cost = transformation_cost(space, initial_assignment(space), mu)
    stable = is_stable(space, mu)
    print(f"stable: {'yes' if stable else 'no'}")
    print(f"cost: {cost}")
    for node, kind, level in overloaded_resources(space, mu):
        print(f"overloaded: node {node} resource {kind} remaining {level}")
    return EXIT_OK if stable else EXIT_UNSTABLE


def cmd_oracle(args) -> int:
    space = _select(parse_instance(_read_text(args.instance)), args.services, args.nodes)
    cost, _ = exhaustive_minimum(space, max_services=args.max_services)
    if cost is None:
        print("infeasible")
        return EXIT_UNSTABLE
    print(cost)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "bench": cmd_bench, "verify": cmd_verify, "oracle": cmd_oracle}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for "no stable solution"
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (DrsopError, ValueError) as exc:
        print(f"drsop: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
