"""Single-seed ash census.

A seed is run alone on the unbounded plane until what remains is periodic
(spaceships may keep travelling). The debris is then split into objects,
each object is classified as a still life, oscillator or spaceship and given
a canonical code, and the counts per type make up the census report.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from . import canon
from .ca import Plane
from .errors import Unstabilized
from .genome import Seed



@dataclass(frozen=True)
class CensusLimits:
    p_max: int = 30
    confirm_periods: int = 10
    g_max: int = 20_000
    # spaceships farther than this from everything else, and heading away,
    # are taken off the board so it stays small
    escape_distance: int = 24

    def __post_init__(self):
        if self.p_max < 1 or self.confirm_periods < 1 or self.g_max < 1:
            raise ValueError("census limits must be positive")


class AshClass(enum.Enum):
    STILL_LIFE = "still life"
    OSCILLATOR = "oscillator"
    SPACESHIP = "spaceship"


@dataclass(eq=False)
class AshObject:
    """One ash object: ``phases[0]`` is the reference phase, absolute coordinates."""

    phases: list[np.ndarray]
    period: int
    displacement: tuple[int, int] = (0, 0)

    @property
    def cells(self) -> np.ndarray:
        return self.phases[0]

    @property
    def kind(self) -> AshClass:
        if self.displacement != (0, 0):
            return AshClass.SPACESHIP
        return AshClass.STILL_LIFE if self.period == 1 else AshClass.OSCILLATOR


@dataclass(frozen=True, order=True)
class AshType:
    code: str
    name: str | None = None

    @property
    def label(self) -> str:
        return self.name or self.code


@dataclass
class StabilizedPattern:
    """Periodic remainder of a run.

    ``phases`` hold the stationary debris over one period; spaceships that
    left the scene are already extracted into ``escaped``.
    """

    period: int
    phases: list[np.ndarray]
    stabilization_generation: int
    escaped: list[AshObject] = field(default_factory=list)


@dataclass
class CensusReport:
    counts: dict[AshType, int]
    digest: str | None = None

    @property
    def num_objects(self) -> int:
        return sum(self.counts.values())

    @property
    def num_types(self) -> int:
        return len(self.counts)

    def by_label(self) -> dict[str, int]:
        return {t.label: n for t, n in self.counts.items()}

    def most_common(self) -> list[tuple[AshType, int]]:
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0].label))

    @classmethod
    def from_labels(cls, counts: dict[str, int], digest: str | None = None) -> CensusReport:
        """Build a report from common names (or raw codes)."""
        out = {}
        for label, n in counts.items():
            try:
                out[AshType(canon.code_for_name(label), label)] = n
            except KeyError:
                out[AshType(label, canon.name_table().get(label))] = n
        return cls(out, digest)


def productivity(report: CensusReport) -> int:
    return report.num_objects


def diversity(report: CensusReport) -> int:
    return report.num_types


# -- geometry helpers -------------------------------------------------------

def components(cells: np.ndarray, radius: int = 2) -> list[np.ndarray]:
    """Split cells into clusters of cells linked within Chebyshev ``radius``."""
    cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
    if not len(cells):
        return []
    pairs = cKDTree(cells).query_pairs(r=radius, p=np.inf, output_type="ndarray")
    n = len(cells)
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    count, ids = connected_components(graph, directed=False)
    order = np.argsort(ids, kind="stable")
    splits = np.searchsorted(ids[order], np.arange(1, count))
    return [cells[idx] for idx in np.split(order, splits)]


def _corner(cells: np.ndarray) -> tuple[int, int]:
    lo = cells.min(axis=0)
    return int(lo[0]), int(lo[1])


def _same(a: np.ndarray, b: np.ndarray) -> bool:
    if len(a) != len(b):
        return False
    return bool(np.array_equal(_sorted(a), _sorted(b)))


def _sorted(cells: np.ndarray) -> np.ndarray:
    cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
    return cells[np.lexsort((cells[:, 0], cells[:, 1]))]


def _evolve(cells: np.ndarray, n: int) -> list[np.ndarray]:
    """Phases 0..n of a cell set evolving alone."""
    plane = Plane(cells)
    out = [plane.cells()]
    for _ in range(n):
        plane.advance(1)
        out.append(plane.cells())
    return out


def _recurrence(phases: list[np.ndarray]) -> tuple[int, tuple[int, int]] | None:
    """Smallest p with phases[p] a translate of phases[0], and the shift."""
    if not len(phases[0]):
        return None
    key = canon.shape_key(phases[0])
    c0 = _corner(phases[0])
    for p in range(1, len(phases)):
        if len(phases[p]) and canon.shape_key(phases[p]) == key:
            c = _corner(phases[p])
            return p, (c[0] - c0[0], c[1] - c0[1])
    return None


def _ray_clear(box, velocity, obstacle) -> bool:
    """True if ``box`` moving along ``velocity`` never meets ``obstacle``.

    Boxes are ``(xmin, xmax, ymin, ymax)``; time runs over ``[0, inf)``.
    """
    lo_t, hi_t = 0.0, np.inf
    for axis in range(2):
        b0, b1 = box[2 * axis], box[2 * axis + 1]
        o0, o1 = obstacle[2 * axis], obstacle[2 * axis + 1]
        v = velocity[axis]
        if v == 0:
            if b1 < o0 or b0 > o1:
                return True
            continue
        t0 = (o0 - b1) / v
        t1 = (o1 - b0) / v
        if t0 > t1:
            t0, t1 = t1, t0
        lo_t = max(lo_t, t0)
        hi_t = min(hi_t, t1)
    return lo_t > hi_t


def _bbox(cells: np.ndarray, pad: int = 0):
    lo = cells.min(axis=0)
    hi = cells.max(axis=0)
    return (int(lo[0]) - pad, int(hi[0]) + pad, int(lo[1]) - pad, int(hi[1]) + pad)


# -- stabilization ----------------------------------------------------------

@dataclass
class _Ghost:
    """Population contribution of a spaceship removed from the board."""

    pops: np.ndarray
    start: int

    def at(self, gens: np.ndarray) -> np.ndarray:
        return self.pops[(gens - self.start) % len(self.pops)]


class _Run:
    def __init__(self, seed_cells: np.ndarray, limits: CensusLimits):
        self.limits = limits
        self.plane = Plane(seed_cells)
        # total population per generation, counting removed spaceships
        self.hist = np.zeros(limits.g_max + limits.p_max * (limits.confirm_periods + 2) + 64,
                             dtype=np.int64)
        self.hist[0] = self.plane.population
        self.ghosts: list[_Ghost] = []
        self.escaped: list[AshObject] = []

    @property
    def gen(self) -> int:
        return self.plane.generation

    def advance(self, n: int):
        first = self.gen + 1
        pops = self.plane.advance(n)
        gens = np.arange(first, first + n)
        for g in self.ghosts:
            pops = pops + g.at(gens)
        self.hist[first:first + n] = pops

    def population_period(self) -> int | None:
        c = self.limits.confirm_periods
        t = self.gen
        for p in range(1, self.limits.p_max + 1):
            span = c * p
            if t - span - p < 0:
                break
            tail = self.hist[t - span - p + 1:t + 1]
            if np.array_equal(tail[p:], tail[:-p]):
                return p
        return None

    def onset(self, period: int) -> int:
        """Earliest generation from which total population has ``period``."""
        t = self.gen - period
        while t >= 0 and self.hist[t] == self.hist[t + period]:
            t -= 1
        return t + 1

    def take_ship(self, cells: np.ndarray) -> bool:
        """Move an isolated spaceship off the board if it is one."""
        phases = _evolve(cells, self.limits.p_max)
        rec = _recurrence(phases)
        if rec is None or rec[1] == (0, 0):
            return False
        period, shift = rec
        self.plane.remove(cells)
        self.ghosts.append(_Ghost(np.array([len(ph) for ph in phases[:period]]), self.gen))
        self.escaped.append(AshObject(phases[:period], period, shift))
        return True

    def drop_escapees(self):
        cells = self.plane.cells()
        comps = components(cells)
        if len(comps) < 2:
            return
        d = self.limits.escape_distance
        for comp in comps:
            if len(comp) > 64:
                continue
            box = _bbox(comp)
            others = cells[(cells[:, 0] < box[0] - d) | (cells[:, 0] > box[1] + d)
                           | (cells[:, 1] < box[2] - d) | (cells[:, 1] > box[3] + d)]
            if len(others) != len(cells) - len(comp):
                continue
            phases = _evolve(comp, self.limits.p_max)
            rec = _recurrence(phases)
            if rec is None or rec[1] == (0, 0):
                continue
            if _ray_clear(box, rec[1], _bbox(others, pad=2)):
                self.take_ship(comp)


def _match_states(a: np.ndarray, b: np.ndarray, period: int):
    """Pair the clusters of ``a`` with those of ``b`` one generation-period
    later. Returns the moving clusters of ``b`` with their shifts, or None if
    ``b`` is not ``a`` up to per-cluster translation."""
    if len(a) != len(b):
        return None
    ca, cb = components(a), components(b)
    if len(ca) != len(cb):
        return None
    pool: dict[bytes, list[tuple[tuple[int, int], int]]] = {}
    for j, comp in enumerate(cb):
        pool.setdefault(canon.shape_key(comp), []).append((_corner(comp), j))
    used = set()
    moving = []
    pending = []
    for comp in ca:
        key, corner = canon.shape_key(comp), _corner(comp)
        hit = next((j for c, j in pool.get(key, ()) if c == corner and j not in used), None)
        if hit is None:
            pending.append((key, corner))
        else:
            used.add(hit)
    for key, corner in pending:
        best = None
        for c, j in pool.get(key, ()):
            if j in used:
                continue
            shift = (c[0] - corner[0], c[1] - corner[1])
            dist = max(abs(shift[0]), abs(shift[1]))
            if dist <= period and (best is None or dist < best[0]):
                best = (dist, j, shift)
        if best is None:
            return None
        used.add(best[1])
        moving.append((cb[best[1]], best[2]))
    return moving


def _try_settle(run: _Run, pop_period: int) -> StabilizedPattern | None:
    lim = run.limits
    snaps = [run.plane.cells()]
    for _ in range(lim.p_max):
        run.advance(1)
        snaps.append(run.plane.cells())
    period = None
    for P in range(pop_period, lim.p_max + 1, pop_period):
        if _match_states(snaps[0], snaps[P], P) is not None:
            period = P
            break
    if period is None:
        return None
    # confirm over consecutive periods
    k = 1
    while k < lim.confirm_periods:
        target = (k + 1) * period
        while len(snaps) <= target:
            run.advance(1)
            snaps.append(run.plane.cells())
        if _match_states(snaps[k * period], snaps[target], period) is None:
            return None
        k += 1
    # bring the board to a multiple of the period after the last snapshot
    last = len(snaps) - 1
    while last % period:
        run.advance(1)
        snaps.append(run.plane.cells())
        last += 1
    moving = _match_states(snaps[last - period], snaps[last], period)
    if moving is None:
        return None
    if moving:
        ship_cells = np.concatenate([m[0] for m in moving])
        current = snaps[last]
        keep = ~_rows_in(current, ship_cells)
        rest = current[keep]
        if len(rest):
            obstacle = _bbox(rest, pad=2)
            if not all(_ray_clear(_bbox(c), s, obstacle) for c, s in moving):
                return None
        for cells, _ in moving:
            if not run.take_ship(cells):
                return None
    onset = run.onset(period)
    phases = [run.plane.cells()]
    for _ in range(period - 1):
        run.advance(1)
        phases.append(run.plane.cells())
    run.advance(1)
    if not _same(run.plane.cells(), phases[0]):
        return None
    # with the spaceships gone the remainder may repeat sooner
    period = next(p for p in range(1, period + 1)
                  if period % p == 0 and _same(phases[p % period], phases[0]))
    return StabilizedPattern(period, phases[:period], onset, list(run.escaped))


def _rows_in(cells: np.ndarray, subset: np.ndarray) -> np.ndarray:
    s = {(int(x), int(y)) for x, y in subset}
    return np.array([(int(x), int(y)) in s for x, y in cells], dtype=bool)


def stabilize(seed: Seed | np.ndarray, limits: CensusLimits = CensusLimits()) -> StabilizedPattern:
    """Run a pattern alone until its debris is periodic.

    Population periodicity over ``confirm_periods`` periods is the cheap
    filter; the exact test then compares whole states, allowing each
    cluster its own translation, for the same number of periods.
    ``stabilization_generation`` is where the total population (escaped
    spaceships included) became periodic.
    """
    cells = seed.cells() if isinstance(seed, Seed) else np.asarray(seed, dtype=np.int64)
    run = _Run(cells, limits)
    chunk = 16
    since_sweep = 0
    while run.gen < limits.g_max:
        run.advance(min(chunk, limits.g_max - run.gen))
        since_sweep += chunk
        box = run.plane.bbox()
        if box and since_sweep >= 64 and max(box[1] - box[0], box[3] - box[2]) > 96:
            run.drop_escapees()
            since_sweep = 0
        p = run.population_period()
        if p is not None:
            settled = _try_settle(run, p)
            if settled is not None:
                return settled
    raise Unstabilized(run.gen, run.plane.cells())


# -- object extraction ------------------------------------------------------

def _split_independent(comp_phases: list[np.ndarray], period: int) -> list[list[np.ndarray]]:
    """Split a cluster into its Moore-connected parts if each part, run on
    its own, reproduces exactly its share of the cluster's phases."""
    union = np.unique(np.concatenate(comp_phases), axis=0)
    parts = components(union, radius=1)
    if len(parts) < 2:
        return [comp_phases]
    out = []
    for part in parts:
        members = {(int(x), int(y)) for x, y in part}
        share = [ph[np.array([(int(x), int(y)) in members for x, y in ph], dtype=bool)]
                 if len(ph) else ph for ph in comp_phases]
        if not len(share[0]):
            return [comp_phases]
        alone = _evolve(share[0], period)
        if not all(_same(alone[i], share[i % period]) for i in range(period + 1)):
            return [comp_phases]
        out.append(share)
    return out


def extract_objects(stab: StabilizedPattern) -> list[AshObject]:
    P = stab.period
    objects: list[AshObject] = []
    nonempty = [ph for ph in stab.phases if len(ph)]
    if nonempty:
        union = np.unique(np.concatenate(nonempty), axis=0)
        for comp in components(union):
            members = {(int(x), int(y)) for x, y in comp}
            comp_phases = [ph[np.array([(int(x), int(y)) in members for x, y in ph], dtype=bool)]
                           if len(ph) else ph for ph in stab.phases]
            for phases in _split_independent(comp_phases, P):
                period = next((p for p in range(1, P + 1)
                               if P % p == 0 and _same(phases[p % P], phases[0])), P)
                objects.append(AshObject(phases[:period], period))
    objects.extend(stab.escaped)
    return objects


def canonical_code(obj: AshObject) -> AshType:
    code = canon.object_code(obj.phases, obj.period, obj.kind == AshClass.SPACESHIP)
    return AshType(code, canon.name_table().get(code))


def census(seed: Seed, limits: CensusLimits = CensusLimits()) -> CensusReport:
    stab = stabilize(seed, limits)
    counts = Counter(canonical_code(obj) for obj in extract_objects(stab))
    return CensusReport(dict(counts), seed.digest)
