"""Census of random 16x16 soups at density one half."""

from collections import Counter

import numpy as np

from lifesym.census import census
from lifesym.errors import Unstabilized
from lifesym.genome import random_seed

rng = np.random.default_rng(0)
totals = Counter()
sizes = []
for _ in range(200):
    try:
        rep = census(random_seed(16, 16, 0.5, rng))
    except Unstabilized:
        continue
    sizes.append(rep.num_objects)
    totals.update(rep.by_label())

print(f"{len(sizes)} soups settled, mean {np.mean(sizes):.1f} ashes each")
for label, n in totals.most_common(10):
    print(f"  {n:5d}  {label}")
