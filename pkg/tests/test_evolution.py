import numpy as np
import pytest
from scipy.stats import chisquare

from lifesym import evolution
from lifesym.arena import MatchParams
from lifesym.evolution import (EvoParams, GenomeParams, Population, add_child, breed, evolve,
                               relative_fitness, round_robin, tournament_select)
from lifesym.genome import Seed, random_seed

SMALL = dict(pop_size=8, generations=1, elite_k=4)


def population(fitness_points):
    """Population whose row sums follow ``fitness_points`` (antisymmetry is
    not needed for selection tests)."""
    n = len(fitness_points)
    pts = np.zeros((n, n), dtype=np.int64)
    pts[:, 0] = fitness_points
    return Population([Seed(np.full((1, 1), i % 2)) for i in range(n)], pts)


@pytest.mark.parametrize("bad", [dict(pop_size=0), dict(generations=0), dict(tournament_size=1),
                                 dict(elite_k=300), dict(p_fusion=1.5), dict(pop_size=2, elite_k=2,
                                                                            tournament_size=3)])
def test_params_validation(bad):
    with pytest.raises(ValueError):
        EvoParams(**bad)


def test_genome_params_validation():
    with pytest.raises(ValueError):
        GenomeParams(init_density=2.0)
    with pytest.raises(ValueError):
        GenomeParams(crossover_axis=2)


def test_mean_fitness_is_exactly_half(rng):
    seeds = [random_seed(5, 5, 0.375, rng) for _ in range(12)]
    pop = Population(seeds, round_robin(seeds, MatchParams(), rng))
    f = pop.fitness
    assert pop.points.sum() == 2 * 12 * 12
    assert f.mean() == pytest.approx(0.5, abs=1e-12)
    assert np.all(pop.points + pop.points.T == 4)
    assert np.all((0 <= f) & (f <= 1))


def test_games_per_member(monkeypatch, rng):
    calls = []
    real = evolution.play_pair

    def counting(a, b, match, r):
        calls.append((a, b))
        return real(a, b, match, r)

    monkeypatch.setattr(evolution, "play_pair", counting)
    seeds = [random_seed(5, 5, 0.375, rng) for _ in range(10)]
    round_robin(seeds, MatchParams(), rng)
    # one colour-swapped pair per unordered couple; the two self games per
    # member are fixed at one win and one loss
    assert len(calls) == 10 * 9 // 2
    per_member = {id(s): 2 for s in seeds}
    for a, b in calls:
        per_member[id(a)] += 2
        per_member[id(b)] += 2
    assert set(per_member.values()) == {2 * 10}


def test_identical_block_population_all_ties(rng):
    params = EvoParams(pop_size=10, elite_k=5)
    pop = Population([Seed.from_strings("oo", "oo")] * 10, np.zeros((10, 10)))
    assert np.all(relative_fitness(pop, params, rng) == 0.5)


def test_identical_random_seeds_near_half():
    rng = np.random.default_rng(99)
    s = random_seed(5, 5, 0.375, rng)
    seeds = [s] * 20
    runs = np.array([Population(seeds, round_robin(seeds, MatchParams(), rng)).fitness
                     for _ in range(25)])
    # each member: 25 round robins of 40 games
    assert np.all(np.abs(runs.mean(axis=0) - 0.5) <= 0.05)


def test_tournament_forced(rng):
    pop = population([9, 1])
    assert all(tournament_select(pop, rng, 2) == 0 for _ in range(20))


def test_tournament_full_size_picks_best(rng):
    pop = population([3, 7, 1, 5, 2])
    assert all(tournament_select(pop, rng, 5) == 1 for _ in range(20))


def test_tournament_uniform_on_ties(rng):
    pop = population([4] * 10)
    picks = np.bincount([tournament_select(pop, rng, 2) for _ in range(10_000)], minlength=10)
    assert chisquare(picks).pvalue > 0.001


def test_breed_layer1_keeps_shape(rng):
    params = EvoParams(**SMALL, layer2=False, layer3=False, layer4=False, p_sexual=0, p_fusion=0,
                       genome=GenomeParams(p_flip=0.2))
    seeds = [random_seed(5, 5, 0.4, rng) for _ in range(8)]
    pop = Population(seeds, round_robin(seeds, params.match, rng))
    for _ in range(30):
        child = breed(pop, params, rng)
        assert (child.rows, child.cols) == (5, 5)


def test_breed_fusion(rng):
    params = EvoParams(**SMALL, p_fusion=1.0)
    seeds = [random_seed(int(rng.integers(2, 6)), int(rng.integers(2, 6)), 0.4, rng) for _ in range(8)]
    pop = Population(seeds, round_robin(seeds, params.match, rng))
    areas = sorted(s.area for s in seeds)
    for _ in range(20):
        assert breed(pop, params, rng).area >= 2 * areas[0]


def test_breed_crossover_keeps_a_parent_frame(rng):
    params = EvoParams(**SMALL, layer2=False, p_sexual=1.0, p_fusion=0.0)
    seeds = [random_seed(3 + i % 3, 2 + i % 4, 0.4, rng) for i in range(8)]
    shapes = {(s.rows, s.cols) for s in seeds}
    pop = Population(seeds, round_robin(seeds, params.match, rng))
    for _ in range(30):
        c = breed(pop, params, rng)
        assert (c.rows, c.cols) in shapes


def fixed_points(monkeypatch, table):
    monkeypatch.setattr(evolution, "_pair_points", lambda a, b, m, r: table(a, b))


def test_child_removed_only_when_strictly_worst(monkeypatch, rng):
    params = EvoParams(pop_size=4, elite_k=2)
    seeds = [Seed(np.full((1, i + 1), 1)) for i in range(4)]
    pts = np.full((4, 4), 2, dtype=np.int64)
    pop = Population(seeds, pts)
    child = Seed(np.zeros((2, 2)))
    # child ties everyone: it is among the worst but not strictly
    fixed_points(monkeypatch, lambda a, b: 2)
    for _ in range(20):
        p = Population(seeds, pts.copy())
        gone = add_child(p, child, params, rng)
        assert gone != 4 and child in p.seeds and len(p) == 4
    # child loses every pair: it goes
    fixed_points(monkeypatch, lambda a, b: 0)
    gone = add_child(pop, child, params, rng)
    assert gone == 4 and child not in pop.seeds


def test_worst_member_replaced(monkeypatch, rng):
    params = EvoParams(pop_size=3, elite_k=1)
    seeds = [Seed(np.full((1, i + 1), 1)) for i in range(3)]
    pts = np.array([[2, 4, 4], [0, 2, 3], [0, 1, 2]])
    pop = Population(seeds, pts)
    fixed_points(monkeypatch, lambda a, b: 2)
    assert add_child(pop, Seed(np.zeros((1, 1))), params, rng) == 2
    assert pop.points.sum() == 2 * 3 * 3


def test_births_and_elites():
    log = evolve(EvoParams(pop_size=20, generations=1, elite_k=5, rng_seed=4))
    assert log.births == 20
    assert [r.generation for r in log.records] == [0, 1]
    for rec in log.records:
        assert len(rec.seeds) == 20 and len(rec.elites) == 5
        fits = [f for _, f in rec.elites]
        assert fits == sorted(fits, reverse=True)
        assert rec.fitness.mean() == pytest.approx(0.5, abs=1e-12)


def test_evolve_is_deterministic():
    p = EvoParams(pop_size=8, generations=2, elite_k=3, rng_seed=17)
    assert evolve(p).digest() == evolve(p).digest()
    assert evolve(p).digest() != evolve(EvoParams(pop_size=8, generations=2, elite_k=3,
                                                  rng_seed=18)).digest()


def test_full_reevaluation_mode():
    log = evolve(EvoParams(pop_size=6, generations=2, elite_k=3, rng_seed=1, full_reevaluation=True))
    assert log.births == 12
    assert all(r.fitness.mean() == pytest.approx(0.5, abs=1e-12) for r in log.records)


def test_generation_callback():
    seen = []
    evolve(EvoParams(pop_size=5, generations=2, elite_k=2), on_generation=lambda r: seen.append(r.generation))
    assert seen == [0, 1, 2]
