"""Brute-force reference: score every one of the m**l assignments.

Deliberately shares no code with the searches; it works on dense numpy arrays
built straight from the problem space.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Optional

import numpy as np

from ..exceptions import InputError
from ..model import Assignment, ProblemSpace, id_sort_key, initial_assignment

DEFAULT_MAX_SERVICES = 10


def exhaustive_minimum(space: ProblemSpace, enabled_nodes: Optional[Iterable[str]] = None,
                       mu0: Optional[Mapping] = None, max_services: int = DEFAULT_MAX_SERVICES):
    """Return ``(cost, assignment)`` of the cheapest stable assignment, or ``(None, None)``.

    Ties are broken towards the first assignment in lexicographic node order.
    Refuses instances with more than ``max_services`` services.
    """
    if enabled_nodes is not None:
        space = space.restrict(nodes=enabled_nodes)
    services = sorted(space.service_ids, key=id_sort_key)
    nodes = sorted(space.node_ids, key=id_sort_key)
    l, m = len(services), len(nodes)
    if l > max_services:
        raise InputError(f"{l} services exceed the enumeration cap of {max_services}")
    if m == 0:
        raise InputError("no nodes to enumerate")
    if mu0 is None:
        mu0 = initial_assignment(space)
    req = np.array([space.service_by_id[s].required for s in services], dtype=np.int64).reshape(l, space.d)
    cap = np.array([space.node_by_id[n].available for n in nodes], dtype=np.int64)
    price = np.array([space.service_by_id[s].migration_cost for s in services], dtype=np.int64)
    start = np.array([nodes.index(mu0[s]) for s in services], dtype=np.int64)
    homeless = np.array([space.service_by_id[s].initial_node not in space.node_by_id
                         for s in services], dtype=bool)

    grid = np.array(list(itertools.product(range(m), repeat=l)), dtype=np.int64).reshape(m ** l, l)
    stable = np.ones(len(grid), dtype=bool)
    for n in range(m):
        demand = (grid == n).astype(np.int64) @ req
        stable &= np.all(demand <= cap[n], axis=1)
    pays = (grid != start) | homeless
    costs = pays.astype(np.int64) @ price
    if not stable.any():
        return None, None
    costs = np.where(stable, costs, np.iinfo(np.int64).max)
    best = int(np.argmin(costs))
    return int(costs[best]), Assignment({s: nodes[g] for s, g in zip(services, grid[best])})
