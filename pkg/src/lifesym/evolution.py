"""Steady-state evolution of seeds by Immigration Game tournaments.

Fitness is kept as a points matrix: ``points[i, j]`` is what member ``i``
scored in its colour-swapped pair against member ``j``, stored in half
points (0..4) so that ties stay integral. The diagonal is always 2 (a
self pair is one win and one loss), and ``points[j, i] = 4 - points[i, j]``,
which makes the mean fitness exactly 0.5.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .arena import MatchParams, pair_score, play_pair
from .genome import Seed, crossover, fuse, mutate_flip, mutate_resize, random_seed
from .rle import write_rle


@dataclass(frozen=True)
class GenomeParams:
    init_rows: int = 5
    init_cols: int = 5
    init_density: float = 0.375
    p_flip: float = 0.01
    p_grow: float = 0.5
    crossover_axis: int = 0
    fusion_gap: int = 1

    def __post_init__(self):
        if self.init_rows < 1 or self.init_cols < 1:
            raise ValueError("initial seed dimensions must be >= 1")
        for name in ("init_density", "p_flip", "p_grow"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.crossover_axis not in (0, 1):
            raise ValueError("crossover_axis must be 0 or 1")
        if self.fusion_gap < 0:
            raise ValueError("fusion_gap must be >= 0")


@dataclass(frozen=True)
class EvoParams:
    pop_size: int = 200
    generations: int = 100
    tournament_size: int = 2
    elite_k: int = 50
    layer2: bool = True
    layer3: bool = True
    layer4: bool = True
    p_sexual: float = 0.5
    p_fusion: float = 0.1
    match: MatchParams = field(default_factory=MatchParams)
    genome: GenomeParams = field(default_factory=GenomeParams)
    rng_seed: int = 0
    full_reevaluation: bool = False

    def __post_init__(self):
        if self.pop_size < 1:
            raise ValueError("pop_size must be >= 1")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if self.tournament_size < 2:
            raise ValueError("tournament_size must be >= 2")
        if self.tournament_size > self.pop_size:
            raise ValueError("tournament_size must not exceed pop_size")
        if not 1 <= self.elite_k <= self.pop_size:
            raise ValueError("elite_k must be in [1, pop_size]")
        for name in ("p_sexual", "p_fusion"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


def layer_only(params: EvoParams, top: int) -> dict:
    """Layer switches for a run that enables layers 1..``top``."""
    return {"layer2": top >= 2, "layer3": top >= 3, "layer4": top >= 4}


class Population:
    def __init__(self, seeds: list[Seed], points: np.ndarray):
        self.seeds = list(seeds)
        self.points = np.asarray(points, dtype=np.int64)
        self.births = 0

    def __len__(self):
        return len(self.seeds)

    @property
    def fitness(self) -> np.ndarray:
        return self.points.sum(axis=1) / (4.0 * len(self.seeds))


def _pair_points(a: Seed, b: Seed, match: MatchParams, rng) -> int:
    return int(round(2 * pair_score(play_pair(a, b, match, rng))))


def round_robin(seeds: list[Seed], match: MatchParams, rng: np.random.Generator) -> np.ndarray:
    """Points matrix from one colour-swapped pair between every two seeds."""
    n = len(seeds)
    pts = np.full((n, n), 2, dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            p = _pair_points(seeds[i], seeds[j], match, rng)
            pts[i, j], pts[j, i] = p, 4 - p
    return pts


def relative_fitness(pop: Population, params: EvoParams, rng: np.random.Generator) -> np.ndarray:
    """Fresh round robin over the whole population; stores and returns fitness."""
    pop.points = round_robin(pop.seeds, params.match, rng)
    return pop.fitness


def _argbest(values: np.ndarray, rng, worst: bool = False) -> int:
    target = values.min() if worst else values.max()
    hits = np.flatnonzero(values == target)
    return int(hits[0]) if len(hits) == 1 else int(rng.choice(hits))


def tournament_select(pop: Population, rng: np.random.Generator, size: int = 2) -> int:
    picks = rng.choice(len(pop), size=min(size, len(pop)), replace=False)
    scores = pop.points[picks].sum(axis=1)
    return int(picks[_argbest(scores, rng)])


def breed(pop: Population, params: EvoParams, rng: np.random.Generator) -> Seed:
    g = params.genome
    k = params.tournament_size
    if params.layer4 and rng.random() < params.p_fusion:
        a, b = tournament_select(pop, rng, k), tournament_select(pop, rng, k)
        return fuse(pop.seeds[a], pop.seeds[b], g.fusion_gap)
    if params.layer3 and rng.random() < params.p_sexual:
        a, b = tournament_select(pop, rng, k), tournament_select(pop, rng, k)
        child = crossover(pop.seeds[a], pop.seeds[b], rng, g.crossover_axis)
    else:
        child = pop.seeds[tournament_select(pop, rng, k)]
    if params.layer2:
        child = mutate_resize(child, g.p_grow, rng)
    return mutate_flip(child, g.p_flip, rng)


def add_child(pop: Population, child: Seed, params: EvoParams, rng: np.random.Generator) -> int:
    """Score ``child`` against every member, insert it, then drop the least
    fit member. The child itself goes only if it is strictly the worst.
    Returns the index that was removed (``len(pop)`` means the child)."""
    n = len(pop)
    row = np.array([_pair_points(child, s, params.match, rng) for s in pop.seeds], dtype=np.int64)
    pts = np.empty((n + 1, n + 1), dtype=np.int64)
    pts[:n, :n] = pop.points
    pts[n, :n] = row
    pts[:n, n] = 4 - row
    pts[n, n] = 2
    totals = pts.sum(axis=1)
    low = totals.min()
    losers = np.flatnonzero(totals == low)
    if len(losers) > 1:
        losers = losers[losers != n]
    gone = int(losers[0]) if len(losers) == 1 else int(rng.choice(losers))
    keep = np.delete(np.arange(n + 1), gone)
    seeds = pop.seeds + [child]
    pop.seeds = [seeds[i] for i in keep]
    pop.points = pts[np.ix_(keep, keep)]
    pop.births += 1
    return gone


@dataclass
class GenerationRecord:
    generation: int
    births: int
    seeds: list[Seed]
    fitness: np.ndarray
    elite_k: int

    @property
    def elite_indices(self) -> np.ndarray:
        # stable sort keeps population order among equal fitness
        return np.argsort(-self.fitness, kind="stable")[: self.elite_k]

    @property
    def elites(self) -> list[tuple[Seed, float]]:
        return [(self.seeds[i], float(self.fitness[i])) for i in self.elite_indices]

    def summary(self) -> dict:
        f = self.fitness
        return {"mean": float(f.mean()), "std": float(f.std()),
                "min": float(f.min()), "max": float(f.max())}


@dataclass
class RunLog:
    params: EvoParams
    records: list[GenerationRecord] = field(default_factory=list)

    @property
    def births(self) -> int:
        return self.records[-1].births if self.records else 0

    @property
    def final(self) -> GenerationRecord:
        return self.records[-1]

    def digest(self) -> str:
        h = hashlib.sha256()
        for rec in self.records:
            h.update(f"{rec.generation}:{rec.births}\n".encode())
            for seed, fit in zip(rec.seeds, rec.fitness):
                h.update(write_rle(seed).encode())
                h.update(f"{fit:.12f}\n".encode())
        return h.hexdigest()


def evolve(params: EvoParams, on_generation=None) -> RunLog:
    """Run the steady-state loop for ``generations × pop_size`` births.

    Generation 0 is the random initial population. ``on_generation`` is
    called with each new record as it is taken.
    """
    rng = np.random.default_rng(params.rng_seed)
    g = params.genome
    seeds = [random_seed(g.init_rows, g.init_cols, g.init_density, rng) for _ in range(params.pop_size)]
    pop = Population(seeds, round_robin(seeds, params.match, rng))
    log = RunLog(params)

    def snapshot(gen):
        rec = GenerationRecord(gen, pop.births, list(pop.seeds), pop.fitness, params.elite_k)
        log.records.append(rec)
        if on_generation is not None:
            on_generation(rec)

    snapshot(0)
    for gen in range(1, params.generations + 1):
        for _ in range(params.pop_size):
            child = breed(pop, params, rng)
            add_child(pop, child, params, rng)
            if params.full_reevaluation:
                relative_fitness(pop, params, rng)
        snapshot(gen)
    return log
