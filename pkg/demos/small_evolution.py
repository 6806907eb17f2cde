"""A short all-layers run, then census and shuffle checks on its elites.

Takes about a minute on one core.
"""

import numpy as np

from lifesym.analysis import absolute_fitness, rank_table, shuffle_experiment
from lifesym.census import census
from lifesym.errors import Unstabilized
from lifesym.evolution import EvoParams, evolve


def progress(rec):
    s = rec.summary()
    print(f"gen {rec.generation:3d}  births {rec.births:4d}  best {s['max']:.3f}")


params = EvoParams(pop_size=20, generations=10, elite_k=5, rng_seed=11, p_fusion=0.02)
log = evolve(params, on_generation=progress)
elites = [seed for seed, _ in log.final.elites]

rng = np.random.default_rng(12)
reports = []
for seed in elites:
    try:
        rep = census(seed)
    except Unstabilized:
        print(f"{seed!r}: did not settle")
        continue
    reports.append(rep)
    fit = absolute_fitness(seed, n_opponents=10, rng=rng)
    print(f"{seed!r}: {rep.num_objects} ashes, {rep.num_types} kinds, "
          f"absolute fitness {fit.win_fraction:.2f}")

for row in rank_table(reports).rows[:8]:
    print(f"  {row.label:<20} {row.frequency}")

st = shuffle_experiment(elites, rng=rng)
print(f"shuffled/intact productivity {st.productivity_ratio:.2f}, "
      f"diversity {st.diversity_ratio:.2f}")
