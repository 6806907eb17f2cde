"""B3/S23 Life and the two-colour Immigration Game.

``Grid`` is the reference engine: a sparse map of live cells stepped with
plain numpy. Two compiled fast paths sit beside it and must agree with it
bit for bit: ``run_torus`` for match arenas and ``Plane`` for long
single-pattern runs on the unbounded plane.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from . import _kernels
from .errors import GeometryError, PlacementError
from .genome import Seed


class CellState(enum.IntEnum):
    DEAD = 0
    RED = 1
    BLUE = 2


@dataclass(frozen=True)
class Torus:
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise GeometryError(f"torus must be at least 1x1, got {self.width}x{self.height}")


@dataclass(frozen=True)
class Unbounded:
    pass


Topology = Union[Torus, Unbounded]
Coord = tuple[int, int]


@dataclass(frozen=True)
class Grid:
    """Immutable CA state. ``cells`` maps ``(x, y)`` to a live ``CellState``."""

    topology: Topology = field(default_factory=Unbounded)
    cells: Mapping[Coord, CellState] = field(default_factory=dict)
    generation: int = 0

    def __post_init__(self):
        clean = {}
        torus = self.topology if isinstance(self.topology, Torus) else None
        for (x, y), s in self.cells.items():
            s = CellState(s)
            if s == CellState.DEAD:
                raise ValueError(f"dead cell stored at {(x, y)}")
            if torus and not (0 <= x < torus.width and 0 <= y < torus.height):
                raise GeometryError(f"cell {(x, y)} lies outside the torus")
            clean[(int(x), int(y))] = s
        object.__setattr__(self, "cells", clean)

    @classmethod
    def from_array(cls, board: np.ndarray, topology: Topology | None = None,
                   origin: Coord = (0, 0), generation: int = 0) -> Grid:
        """Wrap a dense ``board[y, x]`` array of cell values."""
        ys, xs = np.nonzero(board)
        ox, oy = origin
        cells = {(int(x) + ox, int(y) + oy): CellState(int(board[y, x])) for y, x in zip(ys, xs)}
        if topology is None:
            topology = Torus(board.shape[1], board.shape[0])
        return cls(topology, cells, generation)

    def to_array(self) -> tuple[np.ndarray, Coord]:
        """Dense ``board[y, x]`` and the ``(x, y)`` of ``board[0, 0]``.

        A torus maps to its full extent; an unbounded grid to the bounding
        box of its live cells.
        """
        if isinstance(self.topology, Torus):
            board = np.zeros((self.topology.height, self.topology.width), dtype=np.uint8)
            origin = (0, 0)
        elif not self.cells:
            return np.zeros((0, 0), dtype=np.uint8), (0, 0)
        else:
            xs = [x for x, _ in self.cells]
            ys = [y for _, y in self.cells]
            origin = (min(xs), min(ys))
            board = np.zeros((max(ys) - origin[1] + 1, max(xs) - origin[0] + 1), dtype=np.uint8)
        for (x, y), s in self.cells.items():
            board[y - origin[1], x - origin[0]] = s
        return board, origin

    def __len__(self):
        return len(self.cells)


def place_pattern(grid: Grid, seed: Seed, origin: Coord, colour: CellState) -> Grid:
    colour = CellState(colour)
    if colour == CellState.DEAD:
        raise ValueError("cannot place a pattern in the dead state")
    ox, oy = origin
    if isinstance(grid.topology, Torus):
        t = grid.topology
        if ox < 0 or oy < 0 or ox + seed.cols > t.width or oy + seed.rows > t.height:
            raise GeometryError(
                f"{seed.rows}x{seed.cols} seed at {origin} does not fit a {t.width}x{t.height} torus")
    cells = dict(grid.cells)
    for dx, dy in seed.cells():
        key = (ox + int(dx), oy + int(dy))
        existing = cells.get(key)
        if existing is not None and existing != colour:
            raise PlacementError(f"cell {key} is already {existing.name}")
        cells[key] = colour
    return Grid(grid.topology, cells, grid.generation)


def _neighbour_sums(live: np.ndarray, red: np.ndarray, wrap: bool):
    if wrap:
        n = np.zeros(live.shape, dtype=np.int16)
        r = np.zeros(live.shape, dtype=np.int16)
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                if dx or dy:
                    n += np.roll(live, (dy, dx), axis=(0, 1))
                    r += np.roll(red, (dy, dx), axis=(0, 1))
        return n, r
    h, w = live.shape
    pl = np.pad(live.astype(np.int16), 1)
    pr = np.pad(red.astype(np.int16), 1)
    n = np.zeros((h, w), dtype=np.int16)
    r = np.zeros((h, w), dtype=np.int16)
    for dy in (0, 1, 2):
        for dx in (0, 1, 2):
            if dx != 1 or dy != 1:
                n += pl[dy:dy + h, dx:dx + w]
                r += pr[dy:dy + h, dx:dx + w]
    return n, r


def step_array(board: np.ndarray, wrap: bool) -> np.ndarray:
    """One generation on a dense board; without ``wrap`` the board must
    already carry a one-cell dead margin."""
    live = board > 0
    red = board == 1
    n, r = _neighbour_sums(live, red, wrap)
    survive = live & ((n == 2) | (n == 3))
    born = ~live & (n == 3)
    out = np.where(survive, board, 0).astype(np.uint8)
    out[born] = np.where(r[born] >= 2, 1, 2)
    return out


def step(grid: Grid) -> Grid:
    if isinstance(grid.topology, Torus):
        board, _ = grid.to_array()
        return Grid.from_array(step_array(board, wrap=True), grid.topology,
                               generation=grid.generation + 1)
    if not grid.cells:
        return Grid(grid.topology, {}, grid.generation + 1)
    board, (ox, oy) = grid.to_array()
    padded = np.pad(board, 1)
    return Grid.from_array(step_array(padded, wrap=False), grid.topology,
                           origin=(ox - 1, oy - 1), generation=grid.generation + 1)


def run(grid: Grid, steps: int) -> Grid:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if isinstance(grid.topology, Torus) and steps:
        board, _ = grid.to_array()
        final = _kernels.immigration_torus(board, steps)
        return Grid.from_array(final, grid.topology, generation=grid.generation + steps)
    for _ in range(steps):
        grid = step(grid)
    return grid


def count_live(grid: Grid, colour: CellState | None = None) -> int:
    """Live cells of one colour, or all live cells when ``colour`` is None."""
    if colour is None:
        return len(grid.cells)
    colour = CellState(colour)
    if colour == CellState.DEAD:
        raise ValueError("count_live counts live cells only")
    return sum(1 for s in grid.cells.values() if s == colour)


def run_torus(board: np.ndarray, steps: int) -> np.ndarray:
    """Fast path: Immigration Game on a dense torus board."""
    return _kernels.immigration_torus(np.ascontiguousarray(board, dtype=np.uint8), steps)


def _empty_box():
    return np.array([1, 0, 1, 0], dtype=np.int64)


class Plane:
    """Mutable dense simulator for plain Life on the unbounded plane.

    Storage grows (and shrinks) with the pattern's bounding box, so only the
    live region is ever touched.
    """

    PAD = 32

    def __init__(self, cells: np.ndarray, generation: int = 0):
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
        self.generation = generation
        self._alloc_for(cells)

    @classmethod
    def from_seed(cls, seed: Seed) -> Plane:
        return cls(seed.cells())

    def _alloc_for(self, cells: np.ndarray, extra: int = 0):
        pad = self.PAD + extra
        if len(cells):
            lo = cells.min(axis=0)
            hi = cells.max(axis=0)
        else:
            lo = hi = np.zeros(2, dtype=np.int64)
        w = int(hi[0] - lo[0]) + 1 + 2 * pad
        h = int(hi[1] - lo[1]) + 1 + 2 * pad
        self._origin = (int(lo[0]) - pad, int(lo[1]) - pad)
        self._bufs = [np.zeros((h, w), dtype=np.uint8), np.zeros((h, w), dtype=np.uint8)]
        self._cur = 0
        self._bb_prev = _empty_box()
        if len(cells):
            r = cells[:, 1] - self._origin[1]
            c = cells[:, 0] - self._origin[0]
            self._bufs[0][r, c] = 1
            self._bb_cur = np.array([r.min(), r.max(), c.min(), c.max()], dtype=np.int64)
        else:
            self._bb_cur = _empty_box()

    @property
    def board(self) -> np.ndarray:
        return self._bufs[self._cur]

    @property
    def population(self) -> int:
        r0, r1, c0, c1 = self._bb_cur
        if r0 > r1:
            return 0
        return int(self.board[r0:r1 + 1, c0:c1 + 1].sum())

    def cells(self) -> np.ndarray:
        """Live cells as an ``(n, 2)`` int64 array of ``(x, y)``, row-major."""
        r0, r1, c0, c1 = self._bb_cur
        if r0 > r1:
            return np.zeros((0, 2), dtype=np.int64)
        ys, xs = np.nonzero(self.board[r0:r1 + 1, c0:c1 + 1])
        return np.stack([xs + c0 + self._origin[0], ys + r0 + self._origin[1]], axis=1).astype(np.int64)

    def bbox(self) -> tuple[int, int, int, int] | None:
        """``(xmin, xmax, ymin, ymax)`` of the live cells, or None if empty."""
        r0, r1, c0, c1 = (int(v) for v in self._bb_cur)
        if r0 > r1:
            return None
        ox, oy = self._origin
        return c0 + ox, c1 + ox, r0 + oy, r1 + oy

    def _fits(self, margin: int) -> bool:
        h, w = self.board.shape
        for bb in (self._bb_cur, self._bb_prev):
            if bb[0] > bb[1]:
                continue
            if bb[0] < margin or bb[2] < margin or bb[1] >= h - margin or bb[3] >= w - margin:
                return False
        return True

    def advance(self, n: int) -> np.ndarray:
        """Step ``n`` generations; returns the population after each one."""
        pops = np.zeros(n, dtype=np.int64)
        if n == 0:
            return pops
        h, w = self.board.shape
        r0, r1, c0, c1 = self._bb_cur
        oversized = r0 <= r1 and h * w > 16 * (r1 - r0 + 1 + 2 * self.PAD) * (c1 - c0 + 1 + 2 * self.PAD)
        if not self._fits(n + 2) or oversized:
            self._alloc_for(self.cells(), extra=n)
        a = self._bufs[self._cur]
        b = self._bufs[1 - self._cur]
        flip = _kernels.life_advance(a, b, n, self._bb_cur, self._bb_prev, pops)
        self._cur ^= flip
        self.generation += n
        return pops

    def remove(self, cells: np.ndarray):
        """Kill the given cells (used to drop escaping spaceships)."""
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
        if not len(cells):
            return
        self.board[cells[:, 1] - self._origin[1], cells[:, 0] - self._origin[0]] = 0
        self._alloc_for(self.cells())

    def to_grid(self) -> Grid:
        return Grid(Unbounded(), {(int(x), int(y)): CellState.RED for x, y in self.cells()},
                    self.generation)
