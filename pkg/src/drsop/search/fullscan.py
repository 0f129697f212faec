"""Exact branch-and-bound over all assignments."""

from __future__ import annotations

import time

from .base import BaseStrategy, outcome_of
from .context import BudgetExhausted, OptimumReached, SearchContext


class FullScan(BaseStrategy):
    """Depth-first branch and bound returning a provably cheapest stable assignment.

    Services are branched in order of decreasing migration cost, trying the
    service's current node first. A branch is cut as soon as

    * the node just filled exceeds its capacity in some resource, or
    * the migration cost committed so far, plus the cost of undecided homeless
      services (they pay wherever they go), reaches the incumbent.

    ``safety_cap_ms`` bounds the wall time; a capped run reports the best
    assignment found so far with ``incomplete=True``.
    """

    strategy_id = "fullscan"

    def __init__(self, safety_cap_ms=None, random_state=0):
        self.safety_cap_ms = safety_cap_ms
        self.random_state = random_state

    def fit(self, space, enabled_nodes=None, mu0=None):
        super().fit(space, enabled_nodes, mu0)
        self.tree_nodes_ = self._tree_nodes
        self.incomplete_ = self.outcome_.incomplete
        return self

    def solve(self, ctx: SearchContext):
        # an exact search ignores the heuristic budget; only the safety cap applies
        ctx.max_candidates = None
        ctx.deadline = None
        if self.safety_cap_ms is not None:
            ctx.deadline = time.monotonic() + self.safety_cap_ms / 1000.0
        incomplete = False
        try:
            self._scan(ctx)
        except OptimumReached:
            pass
        except BudgetExhausted:
            incomplete = True
        return outcome_of(ctx, incomplete)

    def _scan(self, ctx: SearchContext) -> None:
        l, m, d = ctx.l, ctx.m, ctx.d
        self._tree_nodes = 0
        order = sorted(range(l), key=lambda s: (-ctx.migration_cost[s], s))
        stay = ctx.stay
        cost = ctx.migration_cost
        req = ctx.required
        cap = ctx.capacity
        choices = []
        for s in order:
            first = [stay[s]] if stay[s] >= 0 else []
            choices.append(first + [b for b in range(m) if b != stay[s]])
        # forced[k]: cost still owed by homeless services at depth >= k
        forced = [0] * (l + 1)
        for k in range(l - 1, -1, -1):
            s = order[k]
            forced[k] = forced[k + 1] + (cost[s] if stay[s] < 0 else 0)
        loads = [[0] * d for _ in range(m)]
        genes = bytearray(l)
        incumbent = [ctx.best_cost]
        dims = range(d)
        deadline = ctx.deadline

        def descend(k: int, acc: int) -> None:
            if k == l:
                ctx.evaluate_genes(bytes(genes))
                incumbent[0] = ctx.best_cost
                return
            s = order[k]
            r = req[s]
            for b in choices[k]:
                step = acc if b == stay[s] else acc + cost[s]
                best = incumbent[0]
                if best is not None and step + forced[k + 1] >= best:
                    # choices after the stay node all cost the same, so none can do better
                    if b != stay[s]:
                        return
                    continue
                row, c = loads[b], cap[b]
                if any(row[i] + r[i] > c[i] for i in dims):
                    continue
                self._tree_nodes += 1
                # pruned subtrees may go a long time without reaching a leaf
                if deadline is not None and not self._tree_nodes & 0xFFF \
                        and time.monotonic() >= deadline:
                    raise BudgetExhausted()
                for i in dims:
                    row[i] += r[i]
                genes[s] = b
                descend(k + 1, step)
                for i in dims:
                    row[i] -= r[i]

        descend(0, 0)
