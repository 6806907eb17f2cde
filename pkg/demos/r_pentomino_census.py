"""Census of the R-pentomino: run it to stability and list the ash it leaves."""

from lifesym.census import census, canonical_code, extract_objects, stabilize
from lifesym.genome import Seed

r = Seed.from_strings(".oo", "oo.", ".o.")
stab = stabilize(r)
print(f"stable from generation {stab.stabilization_generation}")

for obj in extract_objects(stab):
    t = canonical_code(obj)
    print(f"  {t.code:<24} {t.label}")

report = census(r)
print(f"productivity {report.num_objects}, diversity {report.num_types}")
for t, n in report.most_common():
    print(f"  {n:3d}  {t.label}")
