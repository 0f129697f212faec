"""Shared search machinery: compiled problem, cached candidate evaluation, limits.

Candidates are encoded as ``bytes``: one byte per service (canonical service
order) holding the index of its node among the enabled nodes. The encoding is
injective, which makes it usable directly as the cache key.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, asdict
from typing import Iterable, Mapping, Optional

import numpy as np

from ..exceptions import InputError
from ..model import Assignment, ProblemSpace, check_assignment, id_sort_key, initial_assignment


class StopSearch(Exception):
    """Raised from inside an evaluation to unwind a search."""


class BudgetExhausted(StopSearch):
    """The run's candidate budget or deadline is used up."""


class SliceExhausted(StopSearch):
    """A temporary limit opened with :meth:`SearchContext.limit` is used up."""


class OptimumReached(StopSearch):
    """A stable candidate meets the lower bound; nothing can beat it."""


@dataclass
class SearchStats:
    candidates_examined: int = 0
    unique_candidates: int = 0
    feasibility_checks: int = 0
    cache_hits: int = 0
    restarts: int = 0

    def snapshot(self) -> "SearchStats":
        return SearchStats(**asdict(self))


class Cursor:
    """A point of a local search with its per-node loads kept up to date."""

    __slots__ = ("genes", "loads", "over", "cost")

    def __init__(self, genes: bytes, loads: list, over: int, cost: int):
        self.genes = genes
        self.loads = loads
        self.over = over
        self.cost = cost

    def copy(self) -> "Cursor":
        return Cursor(self.genes, [row[:] for row in self.loads], self.over, self.cost)


class SearchContext:
    """Everything one search run needs: problem data, cache, counters and limits.

    Parameters
    ----------
    space : ProblemSpace
        Instance; services outside ``space`` are not considered.
    enabled_nodes : iterable of str, optional
        Allowed destinations. Defaults to every node of ``space``. Nodes that
        are not enabled are dropped from the space, so services starting on
        them become homeless.
    mu0 : Assignment, optional
        Initial assignment. Defaults to :func:`initial_assignment`.
    max_candidates : int, optional
        Deterministic work budget, in candidate evaluations.
    deadline : float, optional
        ``time.monotonic()`` value after which evaluation stops.
    seed : int
        Seed for the run's random generator.
    """

    def __init__(self, space: ProblemSpace, enabled_nodes: Optional[Iterable[str]] = None,
                 mu0: Optional[Mapping] = None, *, max_candidates: Optional[int] = None,
                 deadline: Optional[float] = None, seed: int = 0):
        if enabled_nodes is not None:
            space = space.restrict(nodes=enabled_nodes)
        if not space.nodes:
            raise InputError("no enabled nodes")
        if len(space.nodes) > 255:
            raise InputError("at most 255 enabled nodes are supported")
        self.space = space
        self.seed = seed
        self.node_ids = tuple(sorted(space.node_ids, key=id_sort_key))
        self.service_ids = space.service_ids
        node_index = {n: i for i, n in enumerate(self.node_ids)}
        self.node_index = node_index
        self.m = len(self.node_ids)
        self.l = len(self.service_ids)
        self.d = space.d
        self.capacity = [space.node_by_id[n].available for n in self.node_ids]
        svc = [space.service_by_id[s] for s in self.service_ids]
        self.required = [s.required for s in svc]
        self.migration_cost = [s.migration_cost for s in svc]
        # -1 marks homeless services: no placement is free for them
        self.home = [node_index.get(s.initial_node, -1) for s in svc]
        self.total_cost = sum(self.migration_cost)
        self.penalty_weight = 1 + self.total_cost
        self.cost_lower_bound = sum(c for c, h in zip(self.migration_cost, self.home) if h < 0)

        if mu0 is None:
            mu0 = initial_assignment(space)
        else:
            check_assignment(space, mu0)
        self.mu0 = Assignment(mu0)
        self.mu0_genes = self.encode(self.mu0)
        # cost is relative to mu0: a service pays unless it sits where mu0 put it
        self.stay = [node_index[self.mu0[s]] if h >= 0 else -1
                     for s, h in zip(self.service_ids, self.home)]

        self._req_arr = np.array(self.required, dtype=np.int64).reshape(self.l, self.d)
        self._cap_arr = np.array(self.capacity, dtype=np.int64).reshape(self.m, self.d)
        self._cost_arr = np.array(self.migration_cost, dtype=np.int64)
        self._stay_arr = np.array(self.stay, dtype=np.int64)
        self._node_range = np.arange(self.m, dtype=np.uint8)

        self.stats = SearchStats()
        self.cache: dict = {}
        self.max_candidates = max_candidates
        self.deadline = deadline
        self._limits: list = []
        self.best_genes: Optional[bytes] = None
        self.best_cost: Optional[int] = None

    # -- encoding -----------------------------------------------------------
    def encode(self, mu: Mapping) -> bytes:
        idx = self.node_index
        try:
            return bytes(idx[mu[s]] for s in self.service_ids)
        except KeyError as exc:
            raise InputError(f"assignment uses unknown or disabled node/service {exc}") from None

    def decode(self, genes: bytes) -> Assignment:
        return Assignment({s: self.node_ids[g] for s, g in zip(self.service_ids, genes)})

    # -- scoring --------------------------------------------------------------
    def score(self, over: int, cost: int) -> int:
        """Lexicographic score: any overload outweighs every possible migration cost."""
        return over * self.penalty_weight + cost

    def loads_of(self, genes: bytes) -> list:
        loads = [[0] * self.d for _ in range(self.m)]
        for g, req in zip(genes, self.required):
            row = loads[g]
            for i, r in enumerate(req):
                row[i] += r
        return loads

    # -- limits -----------------------------------------------------------------
    def _tick(self) -> None:
        stats = self.stats
        if self.max_candidates is not None and stats.candidates_examined >= self.max_candidates:
            raise BudgetExhausted()
        if self.deadline is not None and time.monotonic() >= self.deadline:
            raise BudgetExhausted()
        for lim_candidates, lim_deadline in self._limits:
            if lim_candidates is not None and stats.candidates_examined >= lim_candidates:
                raise SliceExhausted()
            if lim_deadline is not None and time.monotonic() >= lim_deadline:
                raise SliceExhausted()
        stats.candidates_examined += 1

    @property
    def bounded(self) -> bool:
        """True when some candidate budget or deadline will eventually stop the run."""
        if self.max_candidates is not None or self.deadline is not None:
            return True
        return any(c is not None or t is not None for c, t in self._limits)

    @contextmanager
    def limit(self, candidates: Optional[int] = None, seconds: Optional[float] = None):
        """Temporarily cap further evaluations; exceeding it raises :class:`SliceExhausted`."""
        lim = (None if candidates is None else self.stats.candidates_examined + candidates,
               None if seconds is None else time.monotonic() + seconds)
        self._limits.append(lim)
        try:
            yield
        finally:
            self._limits.remove(lim)

    def _record(self, genes: bytes, over: int, cost: int) -> None:
        if over == 0 and (self.best_cost is None or cost < self.best_cost):
            self.best_genes, self.best_cost = genes, cost
            if cost <= self.cost_lower_bound:
                raise OptimumReached()

    # -- evaluation -----------------------------------------------------------
    def evaluate_genes(self, genes: bytes) -> tuple:
        """(overload, cost) of a full candidate, through the cache."""
        self._tick()
        hit = self.cache.get(genes)
        if hit is not None:
            self.stats.cache_hits += 1
            return hit
        self.stats.feasibility_checks += 1
        self.stats.unique_candidates += 1
        g = np.frombuffer(genes, dtype=np.uint8)
        loads = (g[:, None] == self._node_range).T.astype(np.int64) @ self._req_arr
        over = int(np.maximum(loads - self._cap_arr, 0).sum())
        cost = int(self._cost_arr[g != self._stay_arr].sum())
        res = (over, cost)
        self.cache[genes] = res
        self._record(genes, *res)
        return res

    def evaluate(self, mu: Mapping) -> tuple:
        """(stable, cost) of an assignment, through the cache."""
        over, cost = self.evaluate_genes(self.encode(mu))
        return over == 0, cost

    def cursor(self, genes: bytes) -> Cursor:
        """Evaluate ``genes`` and return it as a local-search cursor."""
        over, cost = self.evaluate_genes(genes)
        return Cursor(genes, self.loads_of(genes), over, cost)

    def evaluate_move(self, cur: Cursor, s: int, b: int, key: Optional[bytes] = None) -> tuple:
        """(overload, cost, genes) after moving service ``s`` of ``cur`` onto node ``b``."""
        genes = cur.genes
        if key is None:
            key = genes[:s] + bytes((b,)) + genes[s + 1:]
        self._tick()
        hit = self.cache.get(key)
        if hit is not None:
            self.stats.cache_hits += 1
            return hit[0], hit[1], key
        self.stats.feasibility_checks += 1
        self.stats.unique_candidates += 1
        a = genes[s]
        req = self.required[s]
        la, lb = cur.loads[a], cur.loads[b]
        ca, cb = self.capacity[a], self.capacity[b]
        over = cur.over
        for i, r in enumerate(req):
            if r:
                x, cap = la[i], ca[i]
                over -= (x - cap if x > cap else 0)
                x -= r
                over += (x - cap if x > cap else 0)
                y, cap = lb[i], cb[i]
                over -= (y - cap if y > cap else 0)
                y += r
                over += (y - cap if y > cap else 0)
        st, c = self.stay[s], self.migration_cost[s]
        cost = cur.cost - (c if a != st else 0) + (c if b != st else 0)
        self.cache[key] = (over, cost)
        self._record(key, over, cost)
        return over, cost, key

    def apply_move(self, cur: Cursor, s: int, b: int, over: int, cost: int, genes: bytes) -> None:
        a = cur.genes[s]
        la, lb = cur.loads[a], cur.loads[b]
        for i, r in enumerate(self.required[s]):
            la[i] -= r
            lb[i] += r
        cur.genes, cur.over, cur.cost = genes, over, cost

    def random_genes(self, rng) -> bytes:
        m = self.m
        return bytes(rng.randrange(m) for _ in range(self.l))
