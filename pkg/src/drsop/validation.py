"""Input validation helpers used at public entry points."""

from __future__ import annotations

from typing import Iterable, Optional

from .exceptions import ConfigurationError, InputError
from .model import ProblemSpace


def check_space(space) -> ProblemSpace:
    if not isinstance(space, ProblemSpace):
        raise InputError(f"expected a ProblemSpace, got {type(space).__name__}")
    return space


def check_enabled_nodes(space: ProblemSpace, nodes: Optional[Iterable[str]]) -> tuple:
    """Validated, de-duplicated node list (space order when ``nodes`` is None)."""
    if nodes is None:
        return space.node_ids
    nodes = tuple(dict.fromkeys(nodes))
    if not nodes:
        raise InputError("enabled node list is empty")
    unknown = [n for n in nodes if n not in space.node_by_id]
    if unknown:
        raise InputError(f"unknown nodes: {', '.join(unknown)}")
    return nodes


def check_strategies(ids: Iterable[str]) -> tuple:
    from .search.params import STRATEGY_IDS

    ids = tuple(ids)
    bad = [s for s in ids if s not in STRATEGY_IDS]
    if bad:
        raise ConfigurationError(f"unknown strategy id(s): {', '.join(bad)}")
    return ids
