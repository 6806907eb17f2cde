import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracle
from lifesym.ca import (CellState, Grid, Plane, Torus, Unbounded, count_live, place_pattern,
                        run, run_torus, step, step_array)
from lifesym.errors import GeometryError, PlacementError
from lifesym.genome import Seed

RED, BLUE = CellState.RED, CellState.BLUE
GLIDER = Seed.from_strings(".o.", "..o", "ooo")


def live_set(grid):
    return set(grid.cells)


def boards(max_side=12):
    return st.integers(3, max_side).flatmap(
        lambda h: st.integers(3, max_side).flatmap(
            lambda w: st.lists(st.integers(0, 2), min_size=h * w, max_size=h * w).map(
                lambda v: np.array(v, dtype=np.uint8).reshape(h, w))))


def test_single_cell_placement():
    g = place_pattern(Grid(Torus(8, 8)), Seed.from_strings("o"), (0, 0), RED)
    assert g.cells == {(0, 0): RED}


def test_block_placement_footprint():
    g = place_pattern(Grid(Torus(8, 8)), Seed.from_strings("oo", "oo"), (3, 3), BLUE)
    assert g.cells == {(3, 3): BLUE, (4, 3): BLUE, (3, 4): BLUE, (4, 4): BLUE}


def test_two_placements_counted():
    g = place_pattern(Grid(Torus(20, 20)), GLIDER, (1, 1), RED)
    g = place_pattern(g, GLIDER, (10, 10), BLUE)
    assert count_live(g, RED) == 5 and count_live(g, BLUE) == 5 and count_live(g) == 10


def test_overlap_of_other_colour_rejected():
    g = place_pattern(Grid(Torus(8, 8)), Seed.from_strings("oo"), (0, 0), RED)
    with pytest.raises(PlacementError):
        place_pattern(g, Seed.from_strings("o"), (1, 0), BLUE)


def test_placement_outside_torus_rejected():
    with pytest.raises(GeometryError):
        place_pattern(Grid(Torus(4, 4)), Seed.from_strings("ooo"), (2, 0), RED)


def test_blinker_step():
    g = Grid(Unbounded(), {(1, 0): RED, (1, 1): RED, (1, 2): RED})
    assert step(g).cells == {(0, 1): RED, (1, 1): RED, (2, 1): RED}


@pytest.mark.parametrize("parents,child", [((RED, RED, BLUE), RED), ((BLUE, BLUE, RED), BLUE)])
def test_majority_colour_birth(parents, child):
    cells = dict(zip([(0, 0), (2, 0), (1, 2)], parents))
    nxt = step(Grid(Unbounded(), cells))
    assert nxt.cells[(1, 1)] == child


def test_survivor_keeps_colour():
    # the centre of a blue-armed blinker stays red
    g = Grid(Unbounded(), {(0, 1): BLUE, (1, 1): RED, (2, 1): BLUE})
    assert step(g).cells[(1, 1)] == RED


def test_empty_grid_stays_empty():
    assert step(Grid(Torus(5, 5))).cells == {}
    assert step(Grid()).cells == {}


def test_glider_translates():
    g = place_pattern(Grid(), GLIDER, (0, 0), RED)
    moved = run(g, 4)
    assert live_set(moved) == {(x + 1, y + 1) for x, y in live_set(g)}
    assert moved.generation == 4


def test_run_zero_steps_is_identity():
    g = place_pattern(Grid(Torus(9, 9)), GLIDER, (2, 2), BLUE)
    assert run(g, 0) == g


def test_block_still_after_1000_steps():
    g = place_pattern(Grid(Torus(10, 10)), Seed.from_strings("oo", "oo"), (4, 4), RED)
    assert run(g, 1000).cells == g.cells


def test_count_live_rules():
    g = Grid(Torus(6, 6), {(0, 0): RED, (1, 0): RED, (2, 0): RED, (0, 3): BLUE, (1, 3): BLUE})
    assert count_live(g, RED) == 3
    assert count_live(Grid()) == 0
    blinker = place_pattern(Grid(), Seed.from_strings("ooo"), (0, 0), RED)
    assert count_live(step(blinker)) == 3
    with pytest.raises(ValueError):
        count_live(g, CellState.DEAD)


@settings(max_examples=200, deadline=None)
@given(boards())
def test_torus_step_matches_oracle(board):
    h, w = board.shape
    cells = {(x, y): int(board[y, x]) for y in range(h) for x in range(w) if board[y, x]}
    expect = oracle.immigration_step(cells, w, h)
    got = step(Grid.from_array(board))
    assert {k: int(v) for k, v in got.cells.items()} == expect


@settings(max_examples=100, deadline=None)
@given(boards(16), st.integers(1, 40))
def test_fast_torus_matches_reference_stepping(board, steps):
    ref = board
    for _ in range(steps):
        ref = step_array(ref, wrap=True)
    assert np.array_equal(run_torus(board, steps), ref)


@settings(max_examples=200, deadline=None)
@given(boards())
def test_colour_blindness(board):
    erase = lambda b: (b > 0).astype(np.uint8)
    assert np.array_equal(erase(step_array(board, True)), step_array(erase(board), True))


@settings(max_examples=100, deadline=None)
@given(boards(10), st.integers(0, 7))
def test_step_commutes_with_symmetries(board, k):
    def sym(b):
        b = np.rot90(b, k % 4)
        return np.fliplr(b) if k >= 4 else b
    assert np.array_equal(sym(step_array(board, True)), step_array(np.ascontiguousarray(sym(board)), True))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=20),
       st.integers(-50, 50), st.integers(-50, 50))
def test_unbounded_translation(cells, dx, dy):
    g = Grid(Unbounded(), {c: RED for c in cells})
    h = Grid(Unbounded(), {(x + dx, y + dy): RED for x, y in cells})
    assert {(x + dx, y + dy) for x, y in step(g).cells} == set(step(h).cells)


def test_torus_agrees_with_plane_while_separated():
    # a glider on a big torus behaves as on the plane until it wraps
    g = place_pattern(Grid(Torus(30, 30)), GLIDER, (2, 2), RED)
    p = place_pattern(Grid(), GLIDER, (2, 2), RED)
    for _ in range(40):
        g, p = step(g), step(p)
        assert live_set(g) == live_set(p)


def test_plane_matches_oracle_on_r_pentomino():
    r = Seed.from_strings(".oo", "oo.", ".o.")
    plane = Plane.from_seed(r)
    cells = {(int(x), int(y)) for x, y in r.cells()}
    for chunk in (1, 7, 50, 150):
        pops = plane.advance(chunk)
        for p in pops:
            cells = oracle.life_step(cells)
            assert p == len(cells)
        assert {(int(x), int(y)) for x, y in plane.cells()} == cells


def test_plane_remove():
    plane = Plane(np.array([[0, 0], [1, 0], [0, 1], [1, 1], [10, 10], [11, 10], [12, 10]]))
    plane.remove(np.array([[10, 10], [11, 10], [12, 10]]))
    assert plane.population == 4
    plane.advance(5)
    assert plane.population == 4


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(Torus(3, 3), {(0, 0): CellState.DEAD})
    with pytest.raises(GeometryError):
        Grid(Torus(3, 3), {(3, 0): RED})
    with pytest.raises(GeometryError):
        Torus(0, 4)
