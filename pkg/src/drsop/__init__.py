"""Migration-cost-minimising placement of services on capacity-limited nodes."""

from .exceptions import ConfigurationError, DrsopError, InputError, ParseError
from .model import (
    Assignment, NodeSpec, ProblemSpace, ServiceSpec, are_neighbors, enumerate_neighbors,
    initial_assignment, is_stable, per_service_cost, remaining_resources, services_on_node,
    transformation_cost,
)
from .search import (
    STRATEGY_IDS, FullScan, GeneticAlgorithm, GreedySearch, SearchContext, SearchOutcome,
    SeededGeneticAlgorithm, SimulatedAnnealing, StrategyParams, TabuSearch, exhaustive_minimum,
    make_strategy,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "DrsopError", "InputError", "ParseError",
    "Assignment", "NodeSpec", "ProblemSpace", "ServiceSpec", "are_neighbors",
    "enumerate_neighbors", "initial_assignment", "is_stable", "per_service_cost",
    "remaining_resources", "services_on_node", "transformation_cost",
    "STRATEGY_IDS", "FullScan", "GeneticAlgorithm", "GreedySearch", "SearchContext",
    "SearchOutcome", "SeededGeneticAlgorithm", "SimulatedAnnealing", "StrategyParams",
    "TabuSearch", "exhaustive_minimum", "make_strategy",
]
