"""One-on-one Immigration Game matches between two seeds."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .ca import run_torus
from .errors import GeometryError
from .genome import Seed, orientations


class Outcome(enum.Enum):
    RED_WINS = "red"
    BLUE_WINS = "blue"
    TIE = "tie"


@dataclass(frozen=True)
class MatchParams:
    space_factor: float = 5.0
    time_factor: float = 10.0
    min_gap: int = 4
    random_orientation: bool = True

    def __post_init__(self):
        if self.space_factor <= 0:
            raise ValueError("space_factor must be positive")
        if self.time_factor <= 0:
            raise ValueError("time_factor must be positive")
        if self.min_gap < 0:
            raise ValueError("min_gap must be non-negative")


@dataclass(frozen=True)
class MatchResult:
    red_growth: int
    blue_growth: int

    @property
    def outcome(self) -> Outcome:
        if self.red_growth > self.blue_growth:
            return Outcome.RED_WINS
        if self.blue_growth > self.red_growth:
            return Outcome.BLUE_WINS
        return Outcome.TIE

    def score(self, as_red: bool) -> float:
        """Win credit for one side: 1, 0, or 1/2 for a tie."""
        o = self.outcome
        if o is Outcome.TIE:
            return 0.5
        return 1.0 if (o is Outcome.RED_WINS) == as_red else 0.0


@dataclass
class MatchSetup:
    board: np.ndarray
    steps: int

    @property
    def side(self) -> int:
        return self.board.shape[0]


def score_growth(initial_count: int, final_count: int) -> int:
    if initial_count < 0 or final_count < 0:
        raise ValueError("counts must be non-negative")
    return max(final_count - initial_count, 0)


def arena_size(a: Seed, b: Seed, params: MatchParams) -> tuple[int, int]:
    """Torus side and step budget for a pairing.

    The side scales with the larger seed dimension but never drops below
    what is needed to keep ``min_gap`` dead cells on both sides of the two
    seeds around the torus.
    """
    big = max(a.rows, a.cols, b.rows, b.cols)
    need = max(a.rows, a.cols) + max(b.rows, b.cols) + 2 * params.min_gap
    side = max(math.ceil(params.space_factor * big), need)
    return side, math.ceil(params.time_factor * side)


def _circular_gap(a0: int, alen: int, b0: int, blen: int, side: int) -> int:
    """Dead cells between two intervals on a circle, -1 if they overlap."""
    if (b0 - a0) % side < alen or (a0 - b0) % side < blen:
        return -1
    return min((b0 - a0 - alen) % side, (a0 - b0 - blen) % side)


def _separated(pa, sa, pb, sb, side, gap) -> bool:
    gx = _circular_gap(pa[0], sa[1], pb[0], sb[1], side)
    gy = _circular_gap(pa[1], sa[0], pb[1], sb[0], side)
    return max(gx, gy) >= gap


def place_pair(a_bits: np.ndarray, b_bits: np.ndarray, side: int, gap: int,
               rng: np.random.Generator) -> tuple[tuple[int, int], tuple[int, int]]:
    """Origins ``(x, y)`` for both patterns, drawn uniformly from all
    non-wrapping layouts that keep at least ``gap`` dead cells between the
    two boxes on the torus."""
    sa, sb = a_bits.shape, b_bits.shape
    if max(sa) > side or max(sb) > side:
        raise GeometryError("seed larger than torus")
    xa, ya = side - sa[1] + 1, side - sa[0] + 1
    xb, yb = side - sb[1] + 1, side - sb[0] + 1
    for _ in range(256):
        pa = (int(rng.integers(xa)), int(rng.integers(ya)))
        pb = (int(rng.integers(xb)), int(rng.integers(yb)))
        if _separated(pa, sa, pb, sb, side, gap):
            return pa, pb
    # tight fit: list every valid layout
    options = [((x0, y0), (x1, y1))
               for x0 in range(xa) for y0 in range(ya)
               for x1 in range(xb) for y1 in range(yb)
               if _separated((x0, y0), sa, (x1, y1), sb, side, gap)]
    if not options:
        raise GeometryError(f"no placement keeps {gap} cells between seeds on a {side}x{side} torus")
    return options[int(rng.integers(len(options)))]


def setup_match(a: Seed, b: Seed, params: MatchParams, rng: np.random.Generator) -> MatchSetup:
    """Board with ``a`` in red and ``b`` in blue at random positions."""
    side, steps = arena_size(a, b, params)
    a_bits, b_bits = a.bits, b.bits
    if params.random_orientation:
        a_bits = orientations(a_bits)[int(rng.integers(8))]
        b_bits = orientations(b_bits)[int(rng.integers(8))]
    pa, pb = place_pair(a_bits, b_bits, side, params.min_gap, rng)
    board = np.zeros((side, side), dtype=np.uint8)
    board[pa[1]:pa[1] + a_bits.shape[0], pa[0]:pa[0] + a_bits.shape[1]] = a_bits
    region = board[pb[1]:pb[1] + b_bits.shape[0], pb[0]:pb[0] + b_bits.shape[1]]
    region[b_bits.astype(bool)] = 2
    return MatchSetup(board, steps)


def run_setup(setup: MatchSetup) -> MatchResult:
    start = setup.board
    final = run_torus(start, setup.steps)
    return MatchResult(
        score_growth(int((start == 1).sum()), int((final == 1).sum())),
        score_growth(int((start == 2).sum()), int((final == 2).sum())),
    )


def play_match(a: Seed, b: Seed, params: MatchParams, rng: np.random.Generator) -> MatchResult:
    """``a`` plays red, ``b`` plays blue."""
    return run_setup(setup_match(a, b, params, rng))


def play_pair(a: Seed, b: Seed, params: MatchParams,
              rng: np.random.Generator) -> tuple[MatchResult, MatchResult]:
    """Two games with fresh placements; ``a`` is red in the first, blue in the second."""
    return play_match(a, b, params, rng), play_match(b, a, params, rng)


def pair_score(results: tuple[MatchResult, MatchResult]) -> float:
    """Points (0 to 2) earned by the first seed of a ``play_pair`` call."""
    first, second = results
    return first.score(as_red=True) + second.score(as_red=False)
