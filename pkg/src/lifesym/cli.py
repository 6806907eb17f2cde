"""Command-line entry point: ``lifesym <command> ...``."""

from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import absolute_fitness, correlate, rank_table, shuffle_experiment
from .arena import play_pair
from .canon import reference_ranks
from .census import CensusLimits, census, extract_objects, stabilize, canonical_code
from .config import SEED_ENV, load_config, resolve
from .errors import LifesymError, UndefinedCorrelation, Unstabilized
from .genome import random_seed
from .rle import parse_rle
from .store import CensusCache, RunDirectory, run_evolution


def _rng(seed):
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, 0))
    return np.random.default_rng(seed)


def _read_seed(path):
    return parse_rle(Path(path).read_text())


def _config(path):
    return load_config(path) if path else resolve({})


def cmd_evolve(args):
    cfg = load_config(args.config)
    log = run_evolution(cfg, args.out)
    s = log.final.summary()
    print(f"births {log.births}  generations {len(log.records) - 1}  "
          f"final fitness mean {s['mean']:.3f} max {s['max']:.3f}")
    print(f"run digest {log.digest()}")


def cmd_census(args):
    seed = _read_seed(args.pattern)
    limits = replace(CensusLimits(), g_max=args.gmax)
    stab = stabilize(seed, limits)
    types = [canonical_code(o) for o in extract_objects(stab)]
    counts: dict = {}
    for t in types:
        counts[t] = counts.get(t, 0) + 1
    rows = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0].label))
    if args.csv:
        w = csv.writer(sys.stdout)
        w.writerow(["type", "code", "count"])
        for t, n in rows:
            w.writerow([t.label, t.code, n])
        return
    print(f"stabilized at generation {stab.stabilization_generation}, period {stab.period}")
    for t, n in rows:
        print(f"{n:6d}  {t.label}" + (f"  ({t.code})" if t.name else ""))
    print(f"objects {len(types)}  types {len(counts)}")


def cmd_compete(args):
    a, b = _read_seed(args.a), _read_seed(args.b)
    match = _config(args.config).match
    rng = _rng(args.seed)
    for i, res in enumerate(play_pair(a, b, match, rng), start=1):
        red, blue = ("A", "B") if i == 1 else ("B", "A")
        print(f"game {i}: red={red} growth {res.red_growth}, blue={blue} growth {res.blue_growth}, "
              f"{res.outcome.value}")


def _collect_seeds(paths):
    seeds = []
    for p in map(Path, paths):
        if p.is_dir():
            seeds.extend(RunDirectory(p).elites())
        else:
            seeds.append(_read_seed(p))
    return seeds


def cmd_shuffle_test(args):
    seeds = _collect_seeds(args.paths)
    limits = replace(CensusLimits(), g_max=args.gmax)
    st = shuffle_experiment(seeds, limits, _rng(args.seed))
    print(f"seeds {st.n_seeds}  excluded {st.n_excluded}")
    print(f"productivity intact {st.intact_productivity:.2f} shuffled {st.shuffled_productivity:.2f} "
          f"ratio {st.productivity_ratio:.3f}")
    print(f"diversity    intact {st.intact_diversity:.2f} shuffled {st.shuffled_diversity:.2f} "
          f"ratio {st.diversity_ratio:.3f}")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def cmd_analyze(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = _rng(args.seed)
    seed_rows, run_rows, reports = [], [], []
    seed_data, run_data = [], []
    for path in args.runs:
        run = RunDirectory(path)
        cfg = run.config
        n_opp = args.n_opponents or cfg.n_opponents
        cache = CensusCache(run.root / "census.csv")
        gen = run.generations()[-1]
        per_run = []
        for rank, seed in enumerate(run.elites(gen), start=1):
            fit = absolute_fitness(seed, n_opp, cfg.match, rng).win_fraction
            try:
                rep = cache.get(seed, cfg.census)
                prod, div = rep.num_objects, rep.num_types
                reports.append(rep)
            except Unstabilized:
                prod = div = float("nan")
            seed_rows.append([path, gen, rank, seed.digest, seed.area, f"{fit:.4f}", prod, div])
            per_run.append((fit, seed.area, prod, div))
        seed_data.extend(per_run)
        m = np.nanmean(np.asarray(per_run, dtype=float), axis=0)
        run_data.append(m)
        run_rows.append([path, gen, len(per_run), *(f"{v:.4f}" for v in m)])
    _write_csv(out / "seeds.csv", ["run", "generation", "rank", "digest", "area", "fitness",
                                   "productivity", "diversity"], seed_rows)
    _write_csv(out / "runs.csv", ["run", "generation", "seeds", "fitness", "area",
                                  "productivity", "diversity"], run_rows)
    table = rank_table(reports, reference_ranks())
    _write_csv(out / "ranks.csv", ["type", "frequency", "reference_rank"],
               [[r.label, r.frequency, r.reference_rank or ""] for r in table.rows])
    # run means when there are enough runs, otherwise individual seeds
    if len(run_data) >= 3:
        unit, data = "run", np.asarray(run_data, dtype=float)
    else:
        unit, data = "seed", np.asarray(seed_data, dtype=float)
    corr_rows = []
    for col, name in ((1, "area"), (2, "productivity"), (3, "diversity")):
        ok = ~np.isnan(data[:, 0]) & ~np.isnan(data[:, col])
        try:
            res = correlate(data[ok, 0], data[ok, col])
            corr_rows.append([f"fitness and {name}", unit, res.n, f"{res.r:.3f}",
                              f"{res.p_value:.3g}", "yes" if res.significant() else "no"])
        except (UndefinedCorrelation, ValueError) as exc:
            corr_rows.append([f"fitness and {name}", unit, int(ok.sum()), "", "", str(exc)])
    _write_csv(out / "correlations.csv", ["attributes", "unit", "n", "r", "p", "p<0.05"], corr_rows)
    for row in corr_rows:
        print("  ".join(str(v) for v in row))
    print(f"freq/seeds {table.freq_per_seed:.2f} over {table.num_seeds} censused seeds")


def cmd_soup(args):
    rng = _rng(args.seed)
    limits = replace(CensusLimits(), g_max=args.gmax)
    reports, failed = [], 0
    for _ in range(args.count):
        try:
            reports.append(census(random_seed(args.size, args.size, args.density, rng), limits))
        except Unstabilized:
            failed += 1
    table = rank_table(reports, reference_ranks())
    if args.csv:
        _write_csv(args.csv, ["type", "frequency", "reference_rank"],
                   [[r.label, r.frequency, r.reference_rank or ""] for r in table.rows])
    print(f"soups {len(reports)}  unstabilized {failed}  mean ashes per soup {table.freq_per_seed:.2f}")
    for i, r in enumerate(table.rows[:args.top], start=1):
        print(f"{i:3d}  {r.label:20s} {r.frequency:7d}  reference rank {r.reference_rank or '-'}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lifesym", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("evolve", help="run one evolution into a run directory")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_evolve)

    s = sub.add_parser("census", help="ash census of one RLE pattern")
    s.add_argument("pattern")
    s.add_argument("--gmax", type=int, default=CensusLimits().g_max)
    s.add_argument("--csv", action="store_true", help="print the counts as CSV")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("compete", help="play a colour-swapped pair of games")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--seed", type=int)
    s.add_argument("--config", help="take match parameters from this config")
    s.set_defaults(func=cmd_compete)

    s = sub.add_parser("shuffle-test", help="census intact vs shuffled seeds")
    s.add_argument("paths", nargs="+", help="run directories (final elites) or RLE files")
    s.add_argument("--seed", type=int)
    s.add_argument("--gmax", type=int, default=CensusLimits().g_max)
    s.set_defaults(func=cmd_shuffle_test)

    s = sub.add_parser("analyze", help="fitness, area and ash statistics of final elites")
    s.add_argument("runs", nargs="+")
    s.add_argument("--out", required=True)
    s.add_argument("--n-opponents", type=int)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("soup", help="census a batch of random soups")
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--size", type=int, default=16)
    s.add_argument("--density", type=float, default=0.5)
    s.add_argument("--seed", type=int)
    s.add_argument("--gmax", type=int, default=CensusLimits().g_max)
    s.add_argument("--top", type=int, default=20)
    s.add_argument("--csv")
    s.set_defaults(func=cmd_soup)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (LifesymError, FileNotFoundError, FileExistsError) as exc:
        print(f"lifesym {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
