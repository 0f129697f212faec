from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Optional

from ..exceptions import ConfigurationError
from .base import BaseStrategy
from .fullscan import FullScan
from .genetic import GeneticAlgorithm, SeededGeneticAlgorithm
from .local import GreedySearch, SimulatedAnnealing, TabuSearch

STRATEGY_IDS = ("greedy", "tabu", "sa", "ga", "sga-greedy", "sga-tabu", "sga-sa", "fullscan")


@dataclass(frozen=True)
class StrategyParams:
    """Tunable knobs shared by all strategies.

    ``None`` for ``sa_initial_temperature`` and ``ga_mutation_rate`` means
    "derive from the instance" (mean migration cost, and 1/services).
    """

    tabu_dull_move_limit: int = 50
    sa_initial_temperature: Optional[float] = None
    sa_cooling_factor: float = 0.95
    sa_steps_per_temperature: int = 100
    sa_min_temperature: float = 0.01
    ga_population: int = 100
    ga_generations_cap: int = 10_000
    ga_mutation_rate: Optional[float] = None
    ga_tournament_size: int = 3
    sga_seed_fraction: float = 0.25
    sga_seeding_share: float = 0.25

    def __post_init__(self):
        def need(ok, msg):
            if not ok:
                raise ConfigurationError(msg)

        need(self.tabu_dull_move_limit >= 0, "tabu_dull_move_limit must be >= 0")
        need(self.sa_initial_temperature is None or self.sa_initial_temperature > 0,
             "sa_initial_temperature must be positive")
        need(0 < self.sa_cooling_factor < 1, "sa_cooling_factor must lie in (0, 1)")
        need(self.sa_steps_per_temperature >= 1, "sa_steps_per_temperature must be >= 1")
        need(self.sa_min_temperature >= 0, "sa_min_temperature must be >= 0")
        need(self.ga_population >= 1, "ga_population must be >= 1")
        need(self.ga_generations_cap >= 0, "ga_generations_cap must be >= 0")
        need(self.ga_mutation_rate is None or 0 <= self.ga_mutation_rate <= 1,
             "ga_mutation_rate must lie in [0, 1]")
        need(self.ga_tournament_size >= 1, "ga_tournament_size must be >= 1")
        need(0 < self.sga_seed_fraction <= 1, "sga_seed_fraction must lie in (0, 1]")
        need(0 <= self.sga_seeding_share <= 1, "sga_seeding_share must lie in [0, 1]")

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


def _base_kwargs(base: str, p: StrategyParams) -> dict:
    if base == "tabu":
        return {"dull_move_limit": p.tabu_dull_move_limit}
    if base == "sa":
        return {"initial_temperature": p.sa_initial_temperature,
                "cooling_factor": p.sa_cooling_factor,
                "steps_per_temperature": p.sa_steps_per_temperature,
                "min_temperature": p.sa_min_temperature}
    return {}


def make_strategy(strategy_id: str, params: Optional[StrategyParams] = None,
                  random_state: int = 0, **limits) -> BaseStrategy:
    """Build the estimator for ``strategy_id`` configured from ``params``.

    ``limits`` may carry ``budget_ms``, ``max_candidates`` (heuristics) or
    ``safety_cap_ms`` (fullscan).
    """
    p = params or StrategyParams()
    if strategy_id not in STRATEGY_IDS:
        raise ConfigurationError(f"unknown strategy {strategy_id!r}; "
                                 f"expected one of {', '.join(STRATEGY_IDS)}")
    if strategy_id == "fullscan":
        return FullScan(safety_cap_ms=limits.get("safety_cap_ms"), random_state=random_state)
    common = {"budget_ms": limits.get("budget_ms"),
              "max_candidates": limits.get("max_candidates"),
              "random_state": random_state}
    if strategy_id == "greedy":
        return GreedySearch(**common)
    if strategy_id in ("tabu", "sa"):
        cls = TabuSearch if strategy_id == "tabu" else SimulatedAnnealing
        return cls(**_base_kwargs(strategy_id, p), **common)
    ga = {"population": p.ga_population, "generations_cap": p.ga_generations_cap,
          "mutation_rate": p.ga_mutation_rate, "tournament_size": p.ga_tournament_size}
    if strategy_id == "ga":
        return GeneticAlgorithm(**ga, **common)
    base = strategy_id.split("-", 1)[1]
    return SeededGeneticAlgorithm(base=base, base_params=_base_kwargs(base, p),
                                  seed_fraction=p.sga_seed_fraction,
                                  seeding_share=p.sga_seeding_share, **ga, **common)
