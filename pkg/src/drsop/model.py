"""Problem model: nodes, services, assignments, stability and migration cost.

All types are immutable. Resource levels and costs are plain Python ints, so
sums never overflow or round.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .exceptions import InputError

ResourceVector = tuple  # tuple[int, ...], one level per resource kind


def id_sort_key(ident: str):
    """Natural ordering for identifiers: numeric ids by value, others lexicographically."""
    if ident.isdigit():
        return (0, int(ident), ident)
    return (1, 0, ident)


@dataclass(frozen=True)
class NodeSpec:
    id: str
    available: ResourceVector


@dataclass(frozen=True)
class ServiceSpec:
    id: str
    initial_node: str
    migration_cost: int
    required: ResourceVector


@dataclass(frozen=True)
class ProblemSpace:
    """Nodes with fixed capacities and services with demands and migration costs.

    A service whose ``initial_node`` is not one of ``nodes`` is *homeless*: it
    has to be placed on some node of the space and always pays its migration
    cost.
    """

    kinds: tuple
    nodes: tuple = ()
    services: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "kinds", tuple(self.kinds))
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "services", tuple(self.services))
        if not self.kinds:
            raise InputError("at least one resource kind is required")
        if any(not k for k in self.kinds) or len(set(self.kinds)) != len(self.kinds):
            raise InputError("resource kind names must be unique and non-empty")
        d = len(self.kinds)
        seen = set()
        for n in self.nodes:
            if n.id in seen:
                raise InputError(f"duplicate node id {n.id!r}")
            seen.add(n.id)
            _check_vector(n.available, d, f"node {n.id}")
        seen = set()
        for s in self.services:
            if s.id in seen:
                raise InputError(f"duplicate service id {s.id!r}")
            seen.add(s.id)
            _check_vector(s.required, d, f"service {s.id}")
            if s.migration_cost < 0:
                raise InputError(f"service {s.id}: negative migration cost")

    @property
    def d(self) -> int:
        return len(self.kinds)

    @cached_property
    def node_ids(self) -> tuple:
        return tuple(n.id for n in self.nodes)

    @cached_property
    def service_ids(self) -> tuple:
        """Service ids in canonical (ascending) order."""
        return tuple(sorted((s.id for s in self.services), key=id_sort_key))

    @cached_property
    def node_by_id(self) -> dict:
        return {n.id: n for n in self.nodes}

    @cached_property
    def service_by_id(self) -> dict:
        return {s.id: s for s in self.services}

    def node(self, node_id: str) -> NodeSpec:
        try:
            return self.node_by_id[node_id]
        except KeyError:
            raise InputError(f"unknown node {node_id!r}") from None

    def service(self, service_id: str) -> ServiceSpec:
        try:
            return self.service_by_id[service_id]
        except KeyError:
            raise InputError(f"unknown service {service_id!r}") from None

    def is_homeless(self, service_id: str) -> bool:
        return self.service(service_id).initial_node not in self.node_by_id

    @cached_property
    def total_migration_cost(self) -> int:
        return sum(s.migration_cost for s in self.services)

    def referenced_node_ids(self) -> set:
        return set(self.node_ids) | {s.initial_node for s in self.services}

    def restrict(self, services: Optional[Iterable[str]] = None,
                 nodes: Optional[Iterable[str]] = None) -> "ProblemSpace":
        """Sub-space keeping only the given services and nodes (declaration order kept)."""
        if services is not None:
            keep_s = set(services)
            missing = keep_s - set(self.service_by_id)
            if missing:
                raise InputError(f"unknown services: {sorted(missing, key=id_sort_key)}")
        if nodes is not None:
            keep_n = set(nodes)
            missing = keep_n - set(self.node_by_id)
            if missing:
                raise InputError(f"unknown nodes: {sorted(missing)}")
        return ProblemSpace(
            self.kinds,
            [n for n in self.nodes if nodes is None or n.id in keep_n],
            [s for s in self.services if services is None or s.id in keep_s],
        )


def _check_vector(vec, d: int, what: str) -> None:
    if len(vec) != d:
        raise InputError(f"{what}: expected {d} resource levels, got {len(vec)}")
    for v in vec:
        if not isinstance(v, int) or isinstance(v, bool):
            raise InputError(f"{what}: resource levels must be integers")
        if v < 0:
            raise InputError(f"{what}: negative resource level {v}")


class Assignment(Mapping):
    """Immutable total map service id -> node id."""

    __slots__ = ("_placement", "_hash")

    def __init__(self, placement: Mapping | Iterable = ()):
        self._placement = dict(placement)
        self._hash = None

    def __getitem__(self, service_id):
        return self._placement[service_id]

    def __iter__(self) -> Iterator:
        return iter(sorted(self._placement, key=id_sort_key))

    def __len__(self) -> int:
        return len(self._placement)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._placement.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Assignment):
            return self._placement == other._placement
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{s}->{n}" for s, n in self.items())
        return f"Assignment({body})"

    def moved(self, service_id: str, node_id: str) -> "Assignment":
        placement = dict(self._placement)
        placement[service_id] = node_id
        return Assignment(placement)


def check_assignment(space: ProblemSpace, mu: Mapping) -> None:
    """Raise InputError unless ``mu`` maps every service of ``space`` onto a node of ``space``."""
    services = set(space.service_by_id)
    keys = set(mu)
    if keys != services:
        missing = sorted(services - keys, key=id_sort_key)
        extra = sorted(keys - services, key=id_sort_key)
        raise InputError(f"assignment is not total: missing={missing} unknown={extra}")
    for s, n in mu.items():
        if n not in space.node_by_id:
            raise InputError(f"service {s} mapped to unknown node {n!r}")


def initial_assignment(space: ProblemSpace) -> Assignment:
    """The starting assignment: every service on its initial node.

    Homeless services are pre-placed, in id order, on the node that keeps the
    largest worst-case slack after placement (ties go to the first declared
    node). Their cost is charged wherever they end up.
    """
    if not space.nodes and space.services:
        raise InputError("cannot place services on a space without nodes")
    placement = {}
    load = {n.id: [0] * space.d for n in space.nodes}
    homeless = []
    for sid in space.service_ids:
        s = space.service_by_id[sid]
        if s.initial_node in load:
            placement[sid] = s.initial_node
            load[s.initial_node] = [x + y for x, y in zip(load[s.initial_node], s.required)]
        else:
            homeless.append(s)
    for s in homeless:
        best, best_slack = None, None
        for n in space.nodes:
            slack = min(a - l - r for a, l, r in zip(n.available, load[n.id], s.required))
            if best_slack is None or slack > best_slack:
                best, best_slack = n.id, slack
        placement[s.id] = best
        load[best] = [x + y for x, y in zip(load[best], s.required)]
    return Assignment(placement)


def services_on_node(space: ProblemSpace, mu: Mapping, node: str) -> set:
    space.node(node)
    return {s for s, n in mu.items() if n == node}


def remaining_resources(space: ProblemSpace, mu: Mapping, node: str) -> ResourceVector:
    """Available levels of ``node`` minus the demand of everything placed on it (may go negative)."""
    levels = list(space.node(node).available)
    for sid in services_on_node(space, mu, node):
        for i, r in enumerate(space.service(sid).required):
            levels[i] -= r
    return tuple(levels)


def overload(space: ProblemSpace, mu: Mapping) -> int:
    """Total shortfall: sum over nodes and kinds of max(0, -remaining)."""
    return sum(max(0, -v) for n in space.node_ids for v in remaining_resources(space, mu, n))


def is_stable(space: ProblemSpace, mu: Mapping) -> bool:
    return all(v >= 0 for n in space.node_ids for v in remaining_resources(space, mu, n))


def overloaded_resources(space: ProblemSpace, mu: Mapping) -> list:
    """(node id, kind name, remaining level) for every negative remaining level."""
    out = []
    for n in space.node_ids:
        for kind, v in zip(space.kinds, remaining_resources(space, mu, n)):
            if v < 0:
                out.append((n, kind, v))
    return out


def per_service_cost(space: ProblemSpace, mu0: Mapping, mu1: Mapping, service: str) -> int:
    s = space.service(service)
    if s.initial_node not in space.node_by_id:
        return s.migration_cost
    return 0 if mu0[service] == mu1[service] else s.migration_cost


def transformation_cost(space: ProblemSpace, mu0: Mapping, mu1: Mapping) -> int:
    if set(mu0) != set(mu1):
        raise InputError("assignments cover different service sets")
    return sum(per_service_cost(space, mu0, mu1, sid) for sid in mu0)


def are_neighbors(mu0: Mapping, mu1: Mapping) -> bool:
    if set(mu0) != set(mu1):
        raise InputError("assignments cover different service sets")
    return sum(1 for s in mu0 if mu0[s] != mu1[s]) == 1


def enumerate_neighbors(space: ProblemSpace, mu: Assignment,
                        enabled_nodes: Optional[Iterable[str]] = None) -> Iterator[Assignment]:
    """Every assignment that relocates exactly one service onto an enabled node.

    Ordered by service id, then node id.
    """
    targets = sorted(space.node_ids if enabled_nodes is None else set(enabled_nodes),
                     key=id_sort_key)
    for sid in space.service_ids:
        here = mu[sid]
        for n in targets:
            if n != here:
                yield mu.moved(sid, n)
