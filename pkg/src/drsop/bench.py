"""Scenario ladder runner: time-budgeted restart loops and CSV reporting.

Heuristic runs get two limits. The wall-clock budget is the scaled scenario
budget. The work budget is ``candidates_per_ms`` candidate evaluations per
millisecond of that budget. The work budget is set well below what the
solvers evaluate per millisecond, so it normally binds first and every column
except ``wall_ms`` is reproducible. Set ``candidates_per_ms=None`` to run on
wall-clock time alone.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .exceptions import ConfigurationError, InputError
from .io import RunReport, ScenarioSpec, write_report
from .model import ProblemSpace, is_stable, transformation_cost
from .search import SearchContext, StrategyParams, make_strategy
from .validation import check_enabled_nodes, check_strategies

log = logging.getLogger(__name__)

DEFAULT_CANDIDATES_PER_MS = 5.0
DEFAULT_SEEDS = tuple(range(1, 21))
FULLSCAN_CAP_FACTOR = 10.0


@dataclass(frozen=True)
class BenchPlan:
    instance: ProblemSpace
    scenarios: Sequence[ScenarioSpec] = ()
    budget_scale: float = 1.0
    parallel_runs: int = 1
    params: StrategyParams = field(default_factory=StrategyParams)
    candidates_per_ms: Optional[float] = DEFAULT_CANDIDATES_PER_MS
    fullscan_cap_factor: float = FULLSCAN_CAP_FACTOR

    def __post_init__(self):
        if not self.budget_scale > 0:
            raise ConfigurationError("budget_scale must be positive")
        if self.parallel_runs < 1:
            raise ConfigurationError("parallel_runs must be >= 1")
        if self.candidates_per_ms is not None and not self.candidates_per_ms > 0:
            raise ConfigurationError("candidates_per_ms must be positive")


def scenario_space(instance: ProblemSpace, scenario: ScenarioSpec) -> ProblemSpace:
    """The instance cut down to the scenario's deployed services and enabled nodes."""
    services = scenario.service_ids(instance)
    lo, hi = scenario.service_range
    if len(services) != hi - lo + 1:
        present = {int(s) for s in services}
        missing = [i for i in range(lo, hi + 1) if i not in present]
        raise InputError(f"scenario {scenario.name}: services {missing} not in instance")
    nodes = check_enabled_nodes(instance, scenario.enabled_nodes)
    return instance.restrict(services=services, nodes=nodes)


def run_one(space: ProblemSpace, scenario_name: str, strategy: str, seed: int, budget_ms: int,
            params: StrategyParams, candidates_per_ms: Optional[float] = DEFAULT_CANDIDATES_PER_MS,
            fullscan_cap_factor: float = FULLSCAN_CAP_FACTOR):
    """Run one strategy on an already restricted space; return ``(RunReport, SearchOutcome)``."""
    if strategy == "fullscan":
        est = make_strategy(strategy, params, seed,
                            safety_cap_ms=budget_ms * fullscan_cap_factor)
        max_candidates = None
    else:
        est = make_strategy(strategy, params, seed)
        max_candidates = None if candidates_per_ms is None else round(budget_ms * candidates_per_ms)
    t0 = time.monotonic()
    ctx = SearchContext(space, max_candidates=max_candidates,
                        deadline=t0 + budget_ms / 1000.0, seed=seed)
    outcome = est.solve(ctx)
    wall_ms = round((time.monotonic() - t0) * 1000)
    if outcome.stable_found:
        # independent recheck through the model functions
        if not is_stable(space, outcome.best) or \
                transformation_cost(space, ctx.mu0, outcome.best) != outcome.best_cost:
            raise AssertionError(f"{strategy}/{seed}: reported solution fails recheck")
    st = outcome.stats
    report = RunReport(
        scenario=scenario_name, strategy=strategy, seed=seed,
        best_cost=outcome.best_cost if outcome.stable_found else None,
        stable=outcome.stable_found, restarts=st.restarts,
        candidates_examined=st.candidates_examined, unique_candidates=st.unique_candidates,
        feasibility_checks=st.feasibility_checks, cache_hits=st.cache_hits,
        wall_ms=wall_ms, incomplete=outcome.incomplete,
    )
    return report, outcome


def _task(args) -> RunReport:
    return run_one(*args)[0]


def run_scenario(plan: BenchPlan, scenario: ScenarioSpec) -> list:
    """One RunReport per (strategy, seed) pair, in scenario order."""
    strategies = check_strategies(scenario.strategies)
    space = scenario_space(plan.instance, scenario)
    seeds = scenario.seeds or DEFAULT_SEEDS
    budget = scenario.scaled(plan.budget_scale).budget_ms
    tasks = [(space, scenario.name, s, seed, budget, plan.params, plan.candidates_per_ms,
              plan.fullscan_cap_factor) for s in strategies for seed in seeds]
    log.info("scenario %s: %d runs, %d ms each", scenario.name, len(tasks), budget)
    if plan.parallel_runs == 1 or len(tasks) < 2:
        return [_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(plan.parallel_runs, len(tasks))) as pool:
        return list(pool.map(_task, tasks))


def run_plan(plan: BenchPlan) -> str:
    """Run every scenario of ``plan`` and serialise all reports as one CSV document."""
    for sc in plan.scenarios:
        check_strategies(sc.strategies)
        scenario_space(plan.instance, sc)
    rows = []
    for sc in plan.scenarios:
        rows.extend(run_scenario(plan, sc))
    return write_report(rows)
