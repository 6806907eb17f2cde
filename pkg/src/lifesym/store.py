"""Run directories.

Layout::

    config.yaml          resolved configuration
    manifest.json        version, rng seed and a digest of every file
    fitness.csv          birth, generation, digest, fitness (one row per member
                         at every generation boundary)
    elites/gen{G}_rank{K}.rle
    census.csv           census cache keyed by seed digest (filled on demand)

Files are only appended to while a run is in progress.
"""

from __future__ import annotations

import csv
import hashlib
import json
import re
from pathlib import Path

from . import __version__
from .census import CensusLimits, CensusReport, census
from .config import Config, dump_config, load_config
from .errors import Unstabilized
from .evolution import GenerationRecord, RunLog, evolve
from .genome import Seed
from .rle import parse_rle, write_rle

FITNESS_HEADER = ["birth", "generation", "digest", "fitness"]
CENSUS_HEADER = ["digest", "status", "objects", "types", "counts"]
_ELITE = re.compile(r"gen(\d+)_rank(\d+)\.rle$")


def file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class RunWriter:
    def __init__(self, root: str | Path, config: Config):
        self.root = Path(root)
        self.config = config
        self.root.mkdir(parents=True, exist_ok=True)
        if any(self.root.iterdir()):
            raise FileExistsError(f"run directory is not empty: {self.root}")
        (self.root / "elites").mkdir()
        (self.root / "config.yaml").write_text(dump_config(config.values))
        with open(self.root / "fitness.csv", "w", newline="") as f:
            csv.writer(f).writerow(FITNESS_HEADER)

    def record(self, rec: GenerationRecord):
        with open(self.root / "fitness.csv", "a", newline="") as f:
            w = csv.writer(f)
            for seed, fit in zip(rec.seeds, rec.fitness):
                w.writerow([rec.births, rec.generation, seed.digest, f"{fit:.6f}"])
        for rank, (seed, _) in enumerate(rec.elites, start=1):
            (self.root / "elites" / f"gen{rec.generation}_rank{rank}.rle").write_text(write_rle(seed))

    def finish(self, log: RunLog):
        files = {}
        for p in sorted(self.root.rglob("*")):
            if p.is_file() and p.name != "manifest.json":
                files[p.relative_to(self.root).as_posix()] = file_digest(p)
        manifest = {
            "version": __version__,
            "rng_seed": self.config.evo.rng_seed,
            "rng_seed_from_env": self.config.seed_from_env,
            "births": log.births,
            "run_digest": log.digest(),
            "config": self.config.values,
            "files": files,
        }
        (self.root / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def run_evolution(config: Config, out: str | Path) -> RunLog:
    writer = RunWriter(out, config)
    log = evolve(config.evo, on_generation=writer.record)
    writer.finish(log)
    return log


class RunDirectory:
    """Read access to a finished run."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        if not (self.root / "config.yaml").exists():
            raise FileNotFoundError(f"not a run directory: {self.root}")
        self.config = load_config(self.root / "config.yaml", env={})

    @property
    def manifest(self) -> dict:
        return json.loads((self.root / "manifest.json").read_text())

    def generations(self) -> list[int]:
        gens = {int(m.group(1)) for p in (self.root / "elites").iterdir()
                if (m := _ELITE.match(p.name))}
        return sorted(gens)

    def elites(self, generation: int | None = None) -> list[Seed]:
        if generation is None:
            generation = self.generations()[-1]
        found = []
        for p in (self.root / "elites").iterdir():
            m = _ELITE.match(p.name)
            if m and int(m.group(1)) == generation:
                found.append((int(m.group(2)), p))
        return [parse_rle(p.read_text()) for _, p in sorted(found)]

    def fitness_rows(self) -> list[dict]:
        with open(self.root / "fitness.csv", newline="") as f:
            return list(csv.DictReader(f))

    def digests(self) -> dict[str, str]:
        return {p.relative_to(self.root).as_posix(): file_digest(p)
                for p in sorted(self.root.rglob("*")) if p.is_file()}


def _format_counts(report: CensusReport) -> str:
    return ";".join(f"{label}:{n}" for label, n in sorted(report.by_label().items()))


def _parse_counts(text: str) -> dict[str, int]:
    out = {}
    for item in filter(None, text.split(";")):
        label, n = item.rsplit(":", 1)
        out[label] = int(n)
    return out


class CensusCache:
    """CSV-backed census results keyed by seed digest. Failed censuses are
    cached too and re-raised as ``Unstabilized``."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.rows: dict[str, dict] = {}
        if self.path.exists():
            with open(self.path, newline="") as f:
                for row in csv.DictReader(f):
                    self.rows[row["digest"]] = row

    def _append(self, row: dict):
        new = not self.path.exists()
        with open(self.path, "a", newline="") as f:
            w = csv.DictWriter(f, CENSUS_HEADER)
            if new:
                w.writeheader()
            w.writerow(row)
        self.rows[row["digest"]] = row

    def get(self, seed: Seed, limits: CensusLimits = CensusLimits()) -> CensusReport:
        row = self.rows.get(seed.digest)
        if row is None:
            try:
                rep = census(seed, limits)
            except Unstabilized as exc:
                self._append({"digest": seed.digest, "status": f"unstabilized@{exc.generation}",
                              "objects": "", "types": "", "counts": ""})
                raise
            self._append({"digest": seed.digest, "status": "ok", "objects": rep.num_objects,
                          "types": rep.num_types, "counts": _format_counts(rep)})
            return rep
        if row["status"] != "ok":
            gen = int(row["status"].split("@")[1])
            raise Unstabilized(gen, None)
        return CensusReport.from_labels(_parse_counts(row["counts"]), seed.digest)

    __call__ = get
