"""Two seeds play a colour-swapped pair of Immigration Game matches."""

import numpy as np

from lifesym.arena import MatchParams, arena_size, pair_score, play_pair
from lifesym.genome import Seed

rng = np.random.default_rng(3)
acorn = Seed.from_strings(".o.....", "...o...", "oo..ooo")
block = Seed.from_strings("oo", "oo")
params = MatchParams()

side, steps = arena_size(acorn, block, params)
print(f"torus {side}x{side}, {steps} steps")

first, second = play_pair(acorn, block, params, rng)
print(f"acorn as red:  red {first.red_growth:+d}  blue {first.blue_growth:+d}  -> {first.outcome.name}")
print(f"block as red:  red {second.red_growth:+d}  blue {second.blue_growth:+d}  -> {second.outcome.name}")
print(f"acorn takes {pair_score((first, second)):.1f} of 2 points")
