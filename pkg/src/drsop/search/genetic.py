"""Generational genetic algorithm and its seeded variants.

A genotype is a full assignment: gene ``i`` is the node index of service ``i``.
"""

from __future__ import annotations

import math
import random
import time

import numpy as np

from ..exceptions import ConfigurationError
from .base import BaseStrategy, seeding_run
from .local import GreedySearch, SimulatedAnnealing, TabuSearch


class GeneticAlgorithm(BaseStrategy):
    """GA with uniform crossover, per-gene mutation, tournament selection and elitism of one.

    The initial population is the initial assignment plus uniformly random
    genotypes (the random "drift" population). Fitness is the shared score, so
    any stable individual beats every overloaded one.

    Parameters
    ----------
    population : int
    generations_cap : int
    mutation_rate : float, optional
        Per-gene reassignment probability; defaults to ``1 / n_services``.
    tournament_size : int
    """

    strategy_id = "ga"

    def __init__(self, population=100, generations_cap=10_000, mutation_rate=None,
                 tournament_size=3, budget_ms=None, max_candidates=None, random_state=0):
        self.population = population
        self.generations_cap = generations_cap
        self.mutation_rate = mutation_rate
        self.tournament_size = tournament_size
        self.budget_ms = budget_ms
        self.max_candidates = max_candidates
        self.random_state = random_state

    def _validate_params(self, ctx):
        if self.population < 1:
            raise ConfigurationError("population must be >= 1")
        if self.generations_cap < 0:
            raise ConfigurationError("generations_cap must be >= 0")
        if self.mutation_rate is not None and not 0 <= self.mutation_rate <= 1:
            raise ConfigurationError("mutation_rate must lie in [0, 1]")
        if self.tournament_size < 1:
            raise ConfigurationError("tournament_size must be >= 1")

    def _mutation_rate(self, ctx) -> float:
        if self.mutation_rate is not None:
            return self.mutation_rate
        return 1.0 / ctx.l if ctx.l else 0.0

    def _search(self, ctx, rng):
        # a run that hits the generation cap early is re-run from a new population
        first = True
        while True:
            self.evolve(ctx, rng, self.initial_population(ctx, rng, first))
            if not ctx.bounded:
                return
            ctx.stats.restarts += 1
            first = False

    def initial_population(self, ctx, rng, first: bool) -> list:
        return self._drift(ctx, rng, self.population, first)

    @staticmethod
    def _drift(ctx, rng, size: int, with_mu0: bool) -> list:
        genomes = [ctx.random_genes(rng) for _ in range(size - 1 if with_mu0 else size)]
        return [ctx.mu0_genes] + genomes if with_mu0 else genomes

    def evolve(self, ctx, rng, genomes):
        """Run generations starting from ``genomes`` until the cap or the budget stops it."""
        weight = ctx.penalty_weight
        pop = []
        for g in genomes:
            over, cost = ctx.evaluate_genes(g)
            pop.append((over * weight + cost, g))
        size = len(pop)
        l, m = ctx.l, ctx.m
        rate = self._mutation_rate(ctx)
        k = self.tournament_size

        def pick():
            best = None
            for _ in range(k):
                cand = pop[rng.randrange(size)]
                if best is None or cand[0] < best[0]:
                    best = cand
            return best[1]

        for _ in range(self.generations_cap):
            if size < 2 and rate == 0:
                return
            elite = min(pop, key=lambda p: p[0])
            nxt = [elite]
            while len(nxt) < size:
                child = self.crossover(rng, pick(), pick(), l)
                if rate > 0:
                    child = self.mutate(rng, child, rate, m)
                over, cost = ctx.evaluate_genes(child)
                nxt.append((over * weight + cost, child))
            if size == 1:
                # a lone elite breeds no children; mutate it in place instead
                child = self.mutate(rng, elite[1], rate, m)
                over, cost = ctx.evaluate_genes(child)
                sc = over * weight + cost
                nxt = [(sc, child)] if sc < elite[0] else [elite]
            pop = nxt

    @staticmethod
    def crossover(rng, p1: bytes, p2: bytes, l: int) -> bytes:
        """Uniform crossover: each gene comes from either parent with probability 1/2."""
        if p1 == p2 or not l:
            return p1
        mask = rng.getrandbits(l).to_bytes((l + 7) // 8, "little")
        take = np.unpackbits(np.frombuffer(mask, dtype=np.uint8), count=l, bitorder="little")
        a = np.frombuffer(p1, dtype=np.uint8)
        b = np.frombuffer(p2, dtype=np.uint8)
        return np.where(take.astype(bool), b, a).tobytes()

    @staticmethod
    def mutate(rng, genes: bytes, rate: float, m: int) -> bytes:
        """Reassign each gene to a uniform random node with probability ``rate``.

        Mutated positions are drawn by geometric skipping, which gives the same
        distribution as one coin flip per gene.
        """
        if rate <= 0 or not genes:
            return genes
        out = bytearray(genes)
        n = len(genes)
        if rate >= 1:
            for i in range(n):
                out[i] = rng.randrange(m)
            return bytes(out)
        log_keep = math.log1p(-rate)
        if log_keep == 0.0:
            return genes
        i = -1
        while True:
            skip = math.log(1.0 - rng.random()) / log_keep
            if i + 1 + skip >= n:
                break
            i += 1 + int(skip)
            out[i] = rng.randrange(m)
        return bytes(out)


_BASES = {
    "greedy": GreedySearch,
    "tabu": TabuSearch,
    "sa": SimulatedAnnealing,
}


class SeededGeneticAlgorithm(GeneticAlgorithm):
    """GA whose initial population comes from short runs of a local search.

    ``ceil(population * seed_fraction)`` individuals are produced, each by
    running ``base`` under an even share of ``seeding_share`` of the budget.
    The first seed run starts from the initial assignment; the others start
    from copies of it in which every service is relocated at random with
    probability ``seed_perturbation``, so the seeds are distinct local optima
    close to the current placement. A seed run that yields nothing is replaced
    by a random genotype. With ``seeding_share=0`` this is exactly a plain GA of
    the reduced population size.

    Parameters
    ----------
    base : {"greedy", "tabu", "sa"}
    base_params : dict, optional
        Constructor arguments for the base strategy.
    """

    def __init__(self, base="tabu", base_params=None, seed_fraction=0.25, seeding_share=0.25,
                 seed_perturbation=0.1, population=100, generations_cap=10_000,
                 mutation_rate=None, tournament_size=3, budget_ms=None, max_candidates=None,
                 random_state=0):
        super().__init__(population=population, generations_cap=generations_cap,
                         mutation_rate=mutation_rate, tournament_size=tournament_size,
                         budget_ms=budget_ms, max_candidates=max_candidates,
                         random_state=random_state)
        self.base = base
        self.base_params = base_params
        self.seed_fraction = seed_fraction
        self.seeding_share = seeding_share
        self.seed_perturbation = seed_perturbation

    @property
    def strategy_id(self):
        return f"sga-{self.base}"

    def _validate_params(self, ctx):
        super()._validate_params(ctx)
        if self.base not in _BASES:
            raise ConfigurationError(f"unknown seeding strategy {self.base!r}")
        if not 0 < self.seed_fraction <= 1:
            raise ConfigurationError("seed_fraction must lie in (0, 1]")
        if not 0 <= self.seeding_share <= 1:
            raise ConfigurationError("seeding_share must lie in [0, 1]")
        if not 0 <= self.seed_perturbation <= 1:
            raise ConfigurationError("seed_perturbation must lie in [0, 1]")

    def seed_count(self) -> int:
        return max(1, math.ceil(self.population * self.seed_fraction))

    def initial_population(self, ctx, rng, first: bool) -> list:
        n = self.seed_count()
        if self.seeding_share == 0:
            return self._drift(ctx, rng, n, first)
        base = _BASES[self.base](**(self.base_params or {}))
        per_candidates = per_seconds = None
        if ctx.max_candidates is not None:
            left = ctx.max_candidates - ctx.stats.candidates_examined
            per_candidates = max(1, int(left * self.seeding_share) // n)
        elif ctx.deadline is not None:
            # wall-clock slices only when there is no deterministic work budget
            per_seconds = max(0.0, (ctx.deadline - time.monotonic()) * self.seeding_share / n)
        if per_candidates is not None and hasattr(base, "fitted_to"):
            base = base.fitted_to(ctx, per_candidates)
        genomes = []
        for i in range(n):
            sub_rng = random.Random(rng.getrandbits(64))
            start = ctx.mu0_genes
            if i:
                start = self.mutate(sub_rng, start, self.seed_perturbation, ctx.m)
            found = seeding_run(base, ctx, sub_rng, start, per_candidates, per_seconds)
            genomes.append(found if found is not None else ctx.random_genes(rng))
        return genomes
