"""Measurements over evolved seeds: absolute fitness, ash statistics and
correlation tests."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .arena import MatchParams, pair_score, play_pair
from .census import CensusLimits, CensusReport, census
from .errors import UndefinedCorrelation, Unstabilized
from .genome import Seed, shuffle


@dataclass(frozen=True)
class AbsFitnessResult:
    digest: str
    n_opponents: int
    games_played: int
    win_fraction: float


def absolute_fitness(seed: Seed, n_opponents: int = 50, match: MatchParams = MatchParams(),
                     rng: np.random.Generator | None = None) -> AbsFitnessResult:
    """Win fraction against shuffled copies of the seed itself, which share
    its area and density but not its structure. Ties count half."""
    if n_opponents < 1:
        raise ValueError("n_opponents must be >= 1")
    rng = np.random.default_rng() if rng is None else rng
    points = 0.0
    for _ in range(n_opponents):
        points += pair_score(play_pair(seed, shuffle(seed, rng), match, rng))
    games = 2 * n_opponents
    return AbsFitnessResult(seed.digest, n_opponents, games, points / games)


def pearson(xs, ys) -> float:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson needs two vectors of equal length")
    if len(x) < 3:
        raise ValueError("pearson needs at least 3 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelation("zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    t_statistic: float
    p_value: float
    degenerate: bool = False

    def significant(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha


def t_test_r(r: float, n: int) -> CorrelationResult:
    """Two-tailed Student t test of a Pearson r on ``n - 2`` degrees of freedom.

    The tail mass uses the identity P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2),
    which stays accurate far into the tail where ``1 - cdf`` would round off.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if not -1.0 <= r <= 1.0:
        raise ValueError("r must be in [-1, 1]")
    df = n - 2
    if abs(r) == 1.0:
        return CorrelationResult(r, n, math.copysign(math.inf, r), 0.0, degenerate=True)
    t = r * math.sqrt(df / (1.0 - r * r))
    p = float(betainc(df / 2.0, 0.5, df / (df + t * t)))
    return CorrelationResult(r, n, t, p)


def correlate(xs, ys) -> CorrelationResult:
    return t_test_r(pearson(xs, ys), len(xs))


def ashes_per_area(total_ashes: float, total_area: float) -> float:
    if total_area <= 0:
        raise ValueError("total_area must be positive")
    return total_ashes / total_area


@dataclass(frozen=True)
class RankRow:
    label: str
    frequency: int
    reference_rank: int | None


@dataclass
class RankTable:
    rows: list[RankRow]
    total_types: int
    total_frequency: int
    num_seeds: int

    @property
    def freq_per_seed(self) -> float:
        return self.total_frequency / self.num_seeds if self.num_seeds else 0.0


def rank_table(reports: list[CensusReport], reference_ranks: dict[str, int] | None = None,
               num_seeds: int | None = None) -> RankTable:
    """Ash types across all reports in decreasing frequency (ties by label)."""
    ref = reference_ranks or {}
    totals: Counter = Counter()
    for rep in reports:
        totals.update(rep.by_label())
    order = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    rows = [RankRow(label, n, ref.get(label)) for label, n in order]
    seeds = len(reports) if num_seeds is None else num_seeds
    return RankTable(rows, len(rows), sum(totals.values()), seeds)


@dataclass
class ShuffleStats:
    n_seeds: int
    n_excluded: int
    intact_productivity: float
    shuffled_productivity: float
    intact_diversity: float
    shuffled_diversity: float
    per_seed: list[tuple[int, int, int, int]]

    @property
    def productivity_ratio(self) -> float:
        return _ratio(self.shuffled_productivity, self.intact_productivity)

    @property
    def diversity_ratio(self) -> float:
        return _ratio(self.shuffled_diversity, self.intact_diversity)


def _ratio(a: float, b: float) -> float:
    return a / b if b > 0 else math.nan


def shuffle_experiment(seeds: list[Seed], limits: CensusLimits = CensusLimits(),
                       rng: np.random.Generator | None = None,
                       census_fn=census) -> ShuffleStats:
    """Census each seed and one shuffled copy of it.

    Pairs where either census fails to settle are left out and counted in
    ``n_excluded``. ``per_seed`` holds (intact objects, intact types,
    shuffled objects, shuffled types).
    """
    rng = np.random.default_rng() if rng is None else rng
    rows = []
    excluded = 0
    for seed in seeds:
        mixed = shuffle(seed, rng)
        try:
            a = census_fn(seed, limits)
            b = census_fn(mixed, limits)
        except Unstabilized:
            excluded += 1
            continue
        rows.append((a.num_objects, a.num_types, b.num_objects, b.num_types))
    if rows:
        m = np.asarray(rows, dtype=float).mean(axis=0)
    else:
        m = np.full(4, math.nan)
    return ShuffleStats(len(rows), excluded, float(m[0]), float(m[2]), float(m[1]), float(m[3]), rows)
