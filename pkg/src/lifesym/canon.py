"""Canonical object codes in extended Wechsler notation.

A code looks like ``xs4_33`` (block), ``xp2_7`` (blinker) or ``xq4_153``
(glider): a class tag (``xs`` still life with its population, ``xp``
oscillator, ``xq`` spaceship, with the period), then the shortest, and
among equal lengths the lexicographically smallest, encoding over every
phase and all 8 orientations.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Iterable

import numpy as np

_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"

# the 8 symmetries of the square as integer matrices acting on (x, y)
SYMMETRIES = [
    np.array(m, dtype=np.int64)
    for m in (
        [[1, 0], [0, 1]], [[-1, 0], [0, 1]], [[1, 0], [0, -1]], [[-1, 0], [0, -1]],
        [[0, 1], [1, 0]], [[0, -1], [1, 0]], [[0, 1], [-1, 0]], [[0, -1], [-1, 0]],
    )
]


def normalize(cells: np.ndarray) -> np.ndarray:
    """Translate cells so the bounding box starts at (0, 0); sorted rows."""
    cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
    if not len(cells):
        return cells
    cells = cells - cells.min(axis=0)
    order = np.lexsort((cells[:, 0], cells[:, 1]))
    return cells[order]


def shape_key(cells: np.ndarray) -> bytes:
    """Translation-invariant identity of a cell set."""
    n = normalize(cells)
    return n.tobytes()


def encode(cells: np.ndarray) -> str:
    """Wechsler string of a cell set in its given orientation."""
    cells = normalize(cells)
    if not len(cells):
        return "0"
    width = int(cells[:, 0].max()) + 1
    height = int(cells[:, 1].max()) + 1
    strips = (height - 1) // 5 + 1
    columns = np.zeros((strips, width), dtype=np.int64)
    np.add.at(columns, (cells[:, 1] // 5, cells[:, 0]), 1 << (cells[:, 1] % 5))
    out = []
    for v in range(strips):
        if v:
            out.append("z")
        zeros = 0
        for value in columns[v]:
            if value == 0:
                zeros += 1
                continue
            while zeros > 39:
                out.append("yz")
                zeros -= 39
            if zeros == 1:
                out.append("0")
            elif zeros == 2:
                out.append("w")
            elif zeros == 3:
                out.append("x")
            elif zeros >= 4:
                out.append("y" + _CHARS[zeros - 4])
            zeros = 0
            out.append(_CHARS[value])
    return "".join(out)


def decode(wechsler: str) -> np.ndarray:
    """Inverse of ``encode`` for codes with or without an ``x?N_`` prefix."""
    if "_" in wechsler:
        wechsler = wechsler.split("_", 1)[1]
    cells = []
    strip = col = 0
    it = iter(wechsler)
    for ch in it:
        if ch == "z":
            strip += 1
            col = 0
        elif ch == "w":
            col += 2
        elif ch == "x":
            col += 3
        elif ch == "y":
            col += 4 + _CHARS.index(next(it))
        else:
            value = _CHARS.index(ch)
            for bit in range(5):
                if value >> bit & 1:
                    cells.append((col, 5 * strip + bit))
            col += 1
    return normalize(np.array(cells, dtype=np.int64).reshape(-1, 2))


def _better(a: str, b: str) -> bool:
    return (len(a), a) < (len(b), b)


def minimal_encoding(phases: Iterable[np.ndarray]) -> str:
    best = None
    for cells in phases:
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, 2)
        for m in SYMMETRIES:
            rep = encode(cells @ m.T)
            if best is None or _better(rep, best):
                best = rep
    return best if best is not None else "0"


def object_code(phases: list[np.ndarray], period: int, moving: bool) -> str:
    """Canonical code of an object given its ``period`` phases."""
    body = minimal_encoding(phases[:period])
    if moving:
        return f"xq{period}_{body}"
    if period == 1:
        return f"xs{len(phases[0])}_{body}"
    return f"xp{period}_{body}"


@lru_cache(maxsize=1)
def name_table() -> dict[str, str]:
    """Bundled code -> common name table."""
    text = resources.files("lifesym").joinpath("data/names.json").read_text()
    return dict(json.loads(text)["names"])


@lru_cache(maxsize=1)
def reference_ranks() -> dict[str, int]:
    """Frequency rank of named objects in the public soup census."""
    text = resources.files("lifesym").joinpath("data/names.json").read_text()
    return dict(json.loads(text)["reference_ranks"])


def code_for_name(name: str) -> str:
    for code, n in name_table().items():
        if n == name:
            return code
    raise KeyError(name)
