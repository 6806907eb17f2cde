"""Seed genomes and the reproduction operators applied to them.

A seed is a small binary matrix. Row 0 is the top row; when a seed is
placed on a grid, ``bits[r, c]`` lands at ``(origin_x + c, origin_y + r)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True, eq=False)
class Seed:
    bits: np.ndarray

    def __post_init__(self):
        bits = np.array(self.bits, dtype=np.uint8, copy=True)
        if bits.ndim != 2:
            raise ValueError("seed bits must be a 2-D matrix")
        if bits.shape[0] < 1 or bits.shape[1] < 1:
            raise ValueError(f"seed must be at least 1x1, got {bits.shape}")
        if bits.size and bits.max() > 1:
            raise ValueError("seed bits must be 0 or 1")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_strings(cls, *rows: str) -> Seed:
        """Build a seed from rows drawn with ``o`` (live) and ``.`` (dead)."""
        width = max(len(r) for r in rows)
        return cls(np.array([[ch == "o" for ch in r.ljust(width, ".")] for r in rows]))

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    @property
    def area(self) -> int:
        return self.bits.size

    @property
    def ones(self) -> int:
        return int(self.bits.sum())

    @property
    def density(self) -> float:
        return self.ones / self.area

    @cached_property
    def digest(self) -> str:
        """SHA-256 of the canonical RLE text; used as a cache key."""
        from hashlib import sha256

        from .rle import write_rle

        return sha256(write_rle(self).encode()).hexdigest()

    def cells(self) -> np.ndarray:
        """Live cells as an ``(n, 2)`` array of ``(x, y)`` offsets."""
        r, c = np.nonzero(self.bits)
        return np.stack([c, r], axis=1).astype(np.int64)

    def __eq__(self, other):
        if not isinstance(other, Seed):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.bits.shape, self.bits.tobytes()))

    def __repr__(self):
        return f"Seed({self.rows}x{self.cols}, ones={self.ones})"


def orientations(bits: np.ndarray) -> list[np.ndarray]:
    """The 8 images of a matrix under the symmetries of the square."""
    out = []
    for k in range(4):
        r = np.rot90(bits, k)
        out.append(r)
        out.append(np.fliplr(r))
    return out


def random_seed(rows: int, cols: int, density: float, rng: np.random.Generator) -> Seed:
    if rows < 1 or cols < 1:
        raise ValueError(f"seed dimensions must be >= 1, got {rows}x{cols}")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    return Seed(rng.random((rows, cols)) < density)


def mutate_flip(seed: Seed, p_flip: float, rng: np.random.Generator) -> Seed:
    """Flip each bit independently with probability ``p_flip`` (layer 1)."""
    mask = rng.random(seed.bits.shape) < p_flip
    return Seed(seed.bits ^ mask)


def mutate_resize(seed: Seed, p_grow: float, rng: np.random.Generator) -> Seed:
    """Insert or delete one random row or column (layer 2).

    Inserted lines are drawn at the seed's current density. Deleting from a
    dimension of size 1 is skipped and the seed comes back unchanged.
    """
    grow = rng.random() < p_grow
    axis = int(rng.integers(2))
    size = seed.bits.shape[axis]
    if grow:
        index = int(rng.integers(size + 1))
        line = rng.random(seed.bits.shape[1 - axis]) < seed.density
        return Seed(np.insert(seed.bits, index, line, axis=axis))
    if size == 1:
        return seed
    index = int(rng.integers(size))
    return Seed(np.delete(seed.bits, index, axis=axis))


def crossover_at(frame: Seed, other: Seed, cut: int, axis: int = 0) -> Seed:
    """Child shaped like ``frame``: lines before ``cut`` from ``frame``, the
    rest from ``other`` cropped or zero-padded to fit."""
    f = frame.bits if axis == 0 else frame.bits.T
    o = other.bits if axis == 0 else other.bits.T
    child = np.zeros_like(f)
    child[:cut] = f[:cut]
    rows = min(f.shape[0], o.shape[0])
    cols = min(f.shape[1], o.shape[1])
    if cut < rows:
        child[cut:rows, :cols] = o[cut:rows, :cols]
    return Seed(child if axis == 0 else child.T)


def crossover(a: Seed, b: Seed, rng: np.random.Generator, axis: int = 0) -> Seed:
    """Single-point crossover (layer 3).

    One parent, picked uniformly, fixes the child's dimensions; the cut index
    is uniform over ``0..n`` where ``n`` is the frame's size along ``axis``
    (0 cuts between rows, 1 between columns).
    """
    frame, other = (a, b) if rng.random() < 0.5 else (b, a)
    cut = int(rng.integers(frame.bits.shape[axis] + 1))
    return crossover_at(frame, other, cut, axis)


def fuse(a: Seed, b: Seed, gap: int = 1) -> Seed:
    """Place ``a`` and ``b`` side by side with ``gap`` dead columns (layer 4).

    The shorter seed is centred vertically; an odd leftover row goes below.
    """
    if gap < 0:
        raise ValueError("gap must be >= 0")
    rows = max(a.rows, b.rows)
    child = np.zeros((rows, a.cols + gap + b.cols), dtype=np.uint8)
    top_a = (rows - a.rows) // 2
    top_b = (rows - b.rows) // 2
    child[top_a:top_a + a.rows, :a.cols] = a.bits
    child[top_b:top_b + b.rows, a.cols + gap:] = b.bits
    return Seed(child)


def shuffle(seed: Seed, rng: np.random.Generator) -> Seed:
    """Random permutation of the cells; keeps area and density."""
    return Seed(rng.permutation(seed.bits.ravel()).reshape(seed.bits.shape))
