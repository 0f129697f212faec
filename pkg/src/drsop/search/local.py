"""Neighbourhood searches: greedy hill-climbing, tabu search and simulated annealing.

A neighbour relocates exactly one service onto another enabled node. Services
and nodes are scanned in id order; on equal scores the first candidate wins.
"""

from __future__ import annotations

import math

from sklearn.base import clone

from ..exceptions import ConfigurationError
from .base import RestartingStrategy


def _best_neighbour(ctx, cur, skip=None):
    """Scan the full neighbourhood of ``cur``; return (score, s, b, over, cost, genes) or None."""
    weight = ctx.penalty_weight
    m = ctx.m
    best = None
    best_score = None
    genes = cur.genes
    for s in range(ctx.l):
        a = genes[s]
        for b in range(m):
            if b == a:
                continue
            if skip is not None:
                key = genes[:s] + bytes((b,)) + genes[s + 1:]
                if key in skip:
                    continue
                over, cost, key = ctx.evaluate_move(cur, s, b, key)
            else:
                over, cost, key = ctx.evaluate_move(cur, s, b)
            sc = over * weight + cost
            if best_score is None or sc < best_score:
                best_score = sc
                best = (sc, s, b, over, cost, key)
    return best


class GreedySearch(RestartingStrategy):
    """Steepest-descent hill climbing with random restarts.

    Each step moves to the best-scoring neighbour; a run ends when no neighbour
    is strictly better than the current assignment.

    Parameters
    ----------
    max_runs : int, optional
        Cap on descents (first from the initial assignment, then random starts).
    budget_ms : float, optional
        Wall-clock budget for :meth:`fit`.
    max_candidates : int, optional
        Candidate-evaluation budget for :meth:`fit`.
    random_state : int
    """

    strategy_id = "greedy"

    def __init__(self, max_runs=None, budget_ms=None, max_candidates=None, random_state=0):
        self.max_runs = max_runs
        self.budget_ms = budget_ms
        self.max_candidates = max_candidates
        self.random_state = random_state

    def run_once(self, ctx, rng, start, track):
        cur = ctx.cursor(start)
        score = ctx.score(cur.over, cur.cost)
        track.offer(score, cur.genes)
        while True:
            best = _best_neighbour(ctx, cur)
            if best is None or best[0] >= score:
                return
            score, s, b, over, cost, key = best
            ctx.apply_move(cur, s, b, over, cost, key)
            track.offer(score, key)


class TabuSearch(RestartingStrategy):
    """Best-non-tabu-neighbour search over a memory of visited assignments.

    Every assignment visited during a run is tabu. The search moves to the best
    non-tabu neighbour even when that is worse, and gives up after
    ``dull_move_limit`` consecutive moves that fail to improve on the run's best.
    """

    strategy_id = "tabu"

    def __init__(self, dull_move_limit=50, max_runs=None, budget_ms=None,
                 max_candidates=None, random_state=0):
        self.dull_move_limit = dull_move_limit
        self.max_runs = max_runs
        self.budget_ms = budget_ms
        self.max_candidates = max_candidates
        self.random_state = random_state

    def _validate_params(self, ctx):
        if self.dull_move_limit < 0:
            raise ConfigurationError("dull_move_limit must be >= 0")

    def run_once(self, ctx, rng, start, track):
        cur = ctx.cursor(start)
        run_best = ctx.score(cur.over, cur.cost)
        track.offer(run_best, cur.genes)
        visited = {cur.genes}
        dull = 0
        while True:
            best = _best_neighbour(ctx, cur, skip=visited)
            if best is None:
                return
            score, s, b, over, cost, key = best
            ctx.apply_move(cur, s, b, over, cost, key)
            visited.add(key)
            track.offer(score, key)
            if score < run_best:
                run_best = score
                dull = 0
            else:
                dull += 1
                if dull > self.dull_move_limit:
                    return


def acceptance_probability(delta: float, temperature: float) -> float:
    """Metropolis rule: 1 for non-worsening moves, exp(-delta/T) otherwise."""
    if delta <= 0:
        return 1.0
    if temperature <= 0:
        return 0.0
    return math.exp(-delta / temperature)


class SimulatedAnnealing(RestartingStrategy):
    """Annealing over random single-service relocations.

    Only one random neighbour is drawn per step, so the neighbourhood is never
    enumerated. The temperature is multiplied by ``cooling_factor`` every
    ``steps_per_temperature`` steps; a run ends once it drops below
    ``min_temperature``.

    Parameters
    ----------
    initial_temperature : float, optional
        Defaults to the mean migration cost of the deployed services.
    """

    strategy_id = "sa"

    def __init__(self, initial_temperature=None, cooling_factor=0.95, steps_per_temperature=100,
                 min_temperature=0.01, max_runs=None, budget_ms=None, max_candidates=None,
                 random_state=0):
        self.initial_temperature = initial_temperature
        self.cooling_factor = cooling_factor
        self.steps_per_temperature = steps_per_temperature
        self.min_temperature = min_temperature
        self.max_runs = max_runs
        self.budget_ms = budget_ms
        self.max_candidates = max_candidates
        self.random_state = random_state

    def _validate_params(self, ctx):
        if not 0 < self.cooling_factor < 1:
            raise ConfigurationError("cooling_factor must lie in (0, 1)")
        if self.steps_per_temperature < 1:
            raise ConfigurationError("steps_per_temperature must be >= 1")
        if self.initial_temperature is not None and self.initial_temperature < 0:
            raise ConfigurationError("initial_temperature must be >= 0")
        if self.min_temperature < 0:
            raise ConfigurationError("min_temperature must be >= 0")

    def start_temperature(self, ctx) -> float:
        if self.initial_temperature is not None:
            return float(self.initial_temperature)
        return ctx.total_cost / ctx.l if ctx.l else 0.0

    def fitted_to(self, ctx, candidates: int) -> "SimulatedAnnealing":
        """Copy whose full cooling schedule fits into ``candidates`` evaluations."""
        t0 = self.start_temperature(ctx)
        if t0 <= self.min_temperature or t0 <= 0:
            return self
        floor = max(self.min_temperature, 1e-12)
        levels = math.ceil(math.log(floor / t0) / math.log(self.cooling_factor))
        steps = max(1, min(self.steps_per_temperature, candidates // max(1, levels)))
        return clone(self).set_params(steps_per_temperature=steps)

    def run_once(self, ctx, rng, start, track):
        cur = ctx.cursor(start)
        weight = ctx.penalty_weight
        score = cur.over * weight + cur.cost
        track.offer(score, cur.genes)
        l, m = ctx.l, ctx.m
        if l == 0 or m < 2:
            return
        temp = self.start_temperature(ctx)
        steps = self.steps_per_temperature
        step = 0
        # a zero start temperature still runs one plateau as a randomized hill-climb
        while True:
            s = rng.randrange(l)
            b = rng.randrange(m - 1)
            if b >= cur.genes[s]:
                b += 1
            over, cost, key = ctx.evaluate_move(cur, s, b)
            new = over * weight + cost
            delta = new - score
            if delta <= 0 or rng.random() < acceptance_probability(delta, temp):
                ctx.apply_move(cur, s, b, over, cost, key)
                score = new
                track.offer(score, key)
            step += 1
            if step % steps == 0:
                temp *= self.cooling_factor
                if temp <= 0 or temp < self.min_temperature:
                    return
