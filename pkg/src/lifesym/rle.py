"""Two-state RLE reading and writing (the format Golly uses)."""

from __future__ import annotations

import re

import numpy as np

from .errors import RLEError
from .genome import Seed

_HEADER = re.compile(
    r"^\s*x\s*=\s*(\d+)\s*,\s*y\s*=\s*(\d+)\s*(?:,\s*rule\s*=\s*([^\s,]+)\s*)?$", re.IGNORECASE
)
_RULES = {"b3/s23", "23/3"}
LINE_WIDTH = 70


def parse_rle(text: str) -> Seed:
    lines = text.splitlines()
    i = 0
    while i < len(lines) and (not lines[i].strip() or lines[i].lstrip().startswith("#")):
        i += 1
    if i == len(lines):
        raise RLEError("missing header line", i + 1, 1)
    m = _HEADER.match(lines[i])
    if not m:
        raise RLEError("malformed header, expected 'x = W, y = H, rule = B3/S23'", i + 1, 1)
    width, height = int(m.group(1)), int(m.group(2))
    if m.group(3) and m.group(3).lower() not in _RULES:
        raise RLEError(f"unsupported rule {m.group(3)!r}", i + 1, m.start(3) + 1)
    if width < 1 or height < 1:
        raise RLEError("pattern dimensions must be positive", i + 1, 1)

    bits = np.zeros((height, width), dtype=np.uint8)
    x = y = 0
    run = ""
    done = False
    for lineno in range(i + 1, len(lines)):
        for col, ch in enumerate(lines[lineno], start=1):
            if done or ch.isspace():
                continue
            if ch.isdigit():
                run += ch
                continue
            count = int(run) if run else 1
            run = ""
            if ch == "b":
                x += count
            elif ch == "o":
                if x + count > width or y >= height:
                    raise RLEError("run overflows declared pattern size", lineno + 1, col)
                bits[y, x:x + count] = 1
                x += count
            elif ch == "$":
                y += count
                x = 0
            elif ch == "!":
                done = True
                continue
            else:
                raise RLEError(f"unexpected character {ch!r}", lineno + 1, col)
            if x > width:
                raise RLEError("run overflows declared width", lineno + 1, col)
        if done:
            break
    if not done:
        raise RLEError("missing terminating '!'", len(lines), 1)
    if run:
        raise RLEError("dangling run count before '!'", len(lines), 1)
    return Seed(bits)


def _row_tokens(row: np.ndarray) -> list[tuple[int, str]]:
    tokens: list[tuple[int, str]] = []
    live = np.nonzero(row)[0]
    if live.size == 0:
        return tokens
    # trailing dead cells are implied by the row end
    row = row[: live[-1] + 1]
    start = 0
    for k in range(1, len(row) + 1):
        if k == len(row) or row[k] != row[start]:
            tokens.append((k - start, "o" if row[start] else "b"))
            start = k
    return tokens


def write_rle(seed: Seed) -> str:
    """Minimal RLE with lines wrapped at 70 characters."""
    tokens: list[tuple[int, str]] = []
    pending_rows = 0
    for r in range(seed.rows):
        row_tokens = _row_tokens(seed.bits[r])
        if row_tokens:
            if pending_rows:
                tokens.append((pending_rows, "$"))
                pending_rows = 0
            tokens.extend(row_tokens)
        pending_rows += 1
    body_items = [f"{n if n > 1 else ''}{c}" for n, c in tokens] + ["!"]

    lines, current = [], ""
    for item in body_items:
        if len(current) + len(item) > LINE_WIDTH:
            lines.append(current)
            current = ""
        current += item
    lines.append(current)
    header = f"x = {seed.cols}, y = {seed.rows}, rule = B3/S23"
    return "\n".join([header, *lines]) + "\n"
