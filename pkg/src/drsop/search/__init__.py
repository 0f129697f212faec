from .base import BaseStrategy, SearchOutcome
from .context import SearchContext, SearchStats
from .fullscan import FullScan
from .genetic import GeneticAlgorithm, SeededGeneticAlgorithm
from .local import GreedySearch, SimulatedAnnealing, TabuSearch, acceptance_probability
from .oracle import exhaustive_minimum
from .params import STRATEGY_IDS, StrategyParams, make_strategy

__all__ = [
    "BaseStrategy", "SearchOutcome", "SearchContext", "SearchStats", "FullScan",
    "GeneticAlgorithm", "SeededGeneticAlgorithm", "GreedySearch", "SimulatedAnnealing",
    "TabuSearch", "acceptance_probability", "exhaustive_minimum", "STRATEGY_IDS",
    "StrategyParams", "make_strategy",
]
