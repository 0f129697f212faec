from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from sklearn.base import BaseEstimator

from ..model import Assignment, ProblemSpace
from ..validation import check_space
from .context import BudgetExhausted, OptimumReached, SearchContext, SearchStats, SliceExhausted


@dataclass(frozen=True)
class SearchOutcome:
    best: Optional[Assignment]
    best_cost: Optional[int]
    stable_found: bool
    stats: SearchStats = field(default_factory=SearchStats)
    incomplete: bool = False


def outcome_of(ctx: SearchContext, incomplete: bool = False) -> SearchOutcome:
    if ctx.best_genes is None:
        return SearchOutcome(None, None, False, ctx.stats.snapshot(), incomplete)
    return SearchOutcome(ctx.decode(ctx.best_genes), ctx.best_cost, True,
                         ctx.stats.snapshot(), incomplete)


class Track:
    """Best point (by score) seen by one local-search run, stable or not."""

    __slots__ = ("score", "genes")

    def __init__(self):
        self.score = None
        self.genes = None

    def offer(self, score: int, genes: bytes) -> bool:
        if self.score is None or score < self.score:
            self.score, self.genes = score, genes
            return True
        return False


class BaseStrategy(BaseEstimator):
    """Common estimator surface for every search strategy.

    Hyper-parameters are constructor arguments (so ``get_params``/``set_params``
    and ``sklearn.base.clone`` work); :meth:`fit` runs one search on a
    :class:`~drsop.model.ProblemSpace` and stores the result in attributes with
    a trailing underscore.
    """

    strategy_id: str = ""

    def fit(self, space: ProblemSpace, enabled_nodes: Optional[Iterable[str]] = None,
            mu0: Optional[Mapping] = None):
        space = check_space(space)
        deadline = None
        if getattr(self, "budget_ms", None) is not None:
            deadline = time.monotonic() + self.budget_ms / 1000.0
        ctx = SearchContext(space, enabled_nodes, mu0,
                            max_candidates=getattr(self, "max_candidates", None),
                            deadline=deadline, seed=self.random_state)
        outcome = self.solve(ctx)
        self.outcome_ = outcome
        self.assignment_ = outcome.best
        self.cost_ = outcome.best_cost
        self.stable_ = outcome.stable_found
        self.stats_ = outcome.stats
        self.mu0_ = ctx.mu0
        return self

    def fit_predict(self, space: ProblemSpace, enabled_nodes=None, mu0=None) -> Optional[Assignment]:
        return self.fit(space, enabled_nodes, mu0).assignment_

    def solve(self, ctx: SearchContext) -> SearchOutcome:
        """Run on a prepared context and return the best stable assignment found."""
        self._validate_params(ctx)
        try:
            self._search(ctx, random.Random(ctx.seed))
        except (BudgetExhausted, OptimumReached):
            pass
        return outcome_of(ctx)

    def _validate_params(self, ctx: SearchContext) -> None:
        pass

    def _search(self, ctx: SearchContext, rng: random.Random) -> None:
        raise NotImplementedError


class RestartingStrategy(BaseStrategy):
    """A local search re-run from fresh random starts until the budget runs out.

    The first run starts from the initial assignment. Without any budget on the
    context only ``max_runs`` (default 1) runs are made.
    """

    def _search(self, ctx, rng):
        self.run_restarts(ctx, rng, Track())

    def run_restarts(self, ctx: SearchContext, rng: random.Random, track: Track,
                     start: Optional[bytes] = None) -> None:
        max_runs = self.max_runs
        if max_runs is None and not ctx.bounded:
            max_runs = 1
        run = 0
        while max_runs is None or run < max_runs:
            if run:
                ctx.stats.restarts += 1
                first = ctx.random_genes(rng)
            else:
                first = ctx.mu0_genes if start is None else start
            self.run_once(ctx, rng, first, track)
            run += 1

    def run_once(self, ctx: SearchContext, rng: random.Random, start: bytes, track: Track) -> None:
        raise NotImplementedError


def seeding_run(strategy: RestartingStrategy, ctx: SearchContext, rng: random.Random,
                start: bytes, candidates: Optional[int], seconds: Optional[float]) -> Optional[bytes]:
    """Run ``strategy`` inside a temporary slice and return its best point (or None)."""
    track = Track()
    with ctx.limit(candidates, seconds):
        try:
            strategy.run_restarts(ctx, rng, track, start=start)
        except SliceExhausted:
            pass
    return track.genes
