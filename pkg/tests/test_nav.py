import dataclasses
import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wander.nav import (
    ARRIVE_RADIUS,
    DEFAULT_SPEED,
    FOLLOW_DISTANCE,
    SQRT2,
    TRAIL_LIMIT,
    DegenerateDirection,
    Unreachable,
    _astar,
    _string_pull,
    advance,
    line_of_sight,
    minimap,
    octile_length,
    plan_path,
    point_at,
    polyline_length,
    record_trail,
    signpost,
)
from wander.session import Session

from .conftest import make_grid, random_grid
from .oracles import OctileGraph, bearing_cw_from_north, dijkstra_cost, grid_blocked_rows, segment_points

# --- hand-built corner cases -------------------------------------------------

OPEN5 = ["....."] * 5

CORNER_CASES = [
    ("open corner to corner", OPEN5, (0, 0), (4, 4)),
    ("open straight", OPEN5, (0, 0), (4, 0)),
    ("open octile mix", ["........."] * 9, (0, 0), (8, 3)),
    ("same cell", ["...", "...", "..."], (1, 1), (1, 1)),
    ("start blocked", ["#..", "...", "..."], (0, 0), (2, 2)),
    ("goal blocked", ["...", "...", "..#"], (0, 0), (2, 2)),
    ("full wall", ["..#..", "..#..", "..#..", "..#..", "..#.."], (0, 2), (4, 2)),
    ("wall with gap", ["..#..", "..#..", "..#..", "..#..", "....."], (0, 2), (4, 2)),
    ("anti diagonal seal", [".#", "#."], (0, 0), (1, 1)),
    ("half corner detour", [".#", ".."], (0, 0), (1, 1)),
    ("open diagonal step", ["..", ".."], (0, 0), (1, 1)),
    ("corridor row", ["........"], (0, 0), (7, 0)),
    ("corridor column", ["."] * 8, (0, 0), (0, 7)),
    ("checkerboard isolation", [".#.#.", "#.#.#", ".#.#.", "#.#.#", ".#.#."], (0, 0), (2, 2)),
    ("sealed diagonal wall", ["..#..", "..#..", ".#...", "..#..", "..#.."], (0, 2), (4, 2)),
    ("two rooms with door", ["...#...", "...#...", ".......", "...#...", "...#..."], (0, 0), (6, 4)),
    ("u trap", [".......", ".#####.", ".#...#.", ".#.#.#.", ".#.#.#.", "...#...", "......."], (3, 4), (3, 6)),
    ("spiral", ["#######", "#.....#", "#.###.#", "#.#...#", "#.#####", "#.....#", "#######"], (3, 3), (1, 1)),
    ("staircase blocks", ["......", ".#....", "..#...", "...#..", "....#.", "......"], (0, 0), (5, 5)),
    ("goal out of bounds", ["...", "...", "..."], (0, 0), (5, 5)),
]

EXACT = {
    "open corner to corner": 4 * SQRT2,
    "open straight": 4.0,
    "open octile mix": 3 * SQRT2 + 5.0,
    "same cell": 0.0,
    "start blocked": None,
    "goal blocked": None,
    "full wall": None,
    "anti diagonal seal": None,
    "half corner detour": 2.0,
    "open diagonal step": SQRT2,
    "corridor row": 7.0,
    "corridor column": 7.0,
    "checkerboard isolation": None,
    "sealed diagonal wall": None,
    "goal out of bounds": None,
}


def assert_valid_cell_path(grid, cells):
    """Adjacency, traversability, and the no-corner-cut rule along a path."""
    assert grid.is_traversable(cells[0])
    for a, b in zip(cells, cells[1:]):
        dx, dy = b[0] - a[0], b[1] - a[1]
        assert max(abs(dx), abs(dy)) == 1, f"non-adjacent step {a} -> {b}"
        assert grid.is_traversable(b)
        if dx and dy:
            assert grid.is_traversable((a[0] + dx, a[1]))
            assert grid.is_traversable((a[0], a[1] + dy))


@pytest.mark.parametrize("name,rows,start,goal", CORNER_CASES, ids=[c[0] for c in CORNER_CASES])
def test_astar_corner_case_matches_oracles(name, rows, start, goal):
    grid = make_grid(rows)
    blocked = grid_blocked_rows(grid)
    expected = dijkstra_cost(blocked, start, goal)
    sp = OctileGraph(blocked).cost(start, goal)
    if expected is None:
        assert sp is None
    else:
        assert sp == pytest.approx(expected, abs=1e-9)

    cells = _astar(grid, start, goal)
    if expected is None:
        assert cells is None
    else:
        assert cells is not None
        assert cells[0] == start and cells[-1] == goal
        assert_valid_cell_path(grid, cells)
        assert octile_length(cells) == pytest.approx(expected, abs=1e-9)

    if name in EXACT:
        exact = EXACT[name]
        if exact is None:
            assert expected is None
        else:
            assert expected == pytest.approx(exact, abs=1e-9)


def test_astar_random_grids_match_oracle_and_are_fast():
    rng = np.random.default_rng(20260815)
    astar_time = 0.0
    reachable = 0
    for i in range(200):
        grid = random_grid(rng, size=32, density=0.15 + 0.3 * (i % 7) / 6)
        blocked = grid_blocked_rows(grid)
        open_cells = [(x, y) for y in range(32) for x in range(32) if not blocked[y][x]]
        idx = rng.integers(0, len(open_cells), size=2)
        start, goal = open_cells[idx[0]], open_cells[idx[1]]

        t0 = time.perf_counter()
        cells = _astar(grid, start, goal)
        astar_time += time.perf_counter() - t0

        expected = OctileGraph(blocked).cost(start, goal)
        if expected is None:
            assert cells is None, f"grid {i}: oracle says unreachable"
        else:
            assert cells is not None, f"grid {i}: oracle found a route"
            assert cells[0] == start and cells[-1] == goal
            assert_valid_cell_path(grid, cells)
            assert octile_length(cells) == pytest.approx(expected, abs=1e-9), f"grid {i}"
            reachable += 1
    assert reachable > 50  # the comparison must not be vacuous
    assert astar_time < 1.0, f"A* spent {astar_time:.3f}s on 200 grids"


def test_astar_deterministic():
    rng = np.random.default_rng(7)
    grid = random_grid(rng, size=24, density=0.3)
    blocked = grid_blocked_rows(grid)
    open_cells = [(x, y) for y in range(24) for x in range(24) if not blocked[y][x]]
    start, goal = open_cells[3], open_cells[-3]
    first = _astar(grid, start, goal)
    for _ in range(3):
        assert _astar(grid, start, goal) == first


# --- line of sight and string pulling -----------------------------------------

def test_line_of_sight_blocked_by_wall():
    grid = make_grid(["..#..", "..#..", "..#..", "..#..", "..#.."])
    assert not line_of_sight(grid, (0.5, 2.5), (4.5, 2.5))
    assert line_of_sight(grid, (0.5, 0.5), (0.5, 4.5))


def test_line_of_sight_respects_sealed_corner():
    grid = make_grid([".#", "#."])
    assert not line_of_sight(grid, (0.5, 0.5), (1.5, 1.5))


def test_line_of_sight_open_diagonal():
    grid = make_grid(["..", ".."])
    assert line_of_sight(grid, (0.5, 0.5), (1.5, 1.5))


def test_line_of_sight_positive_cases_sample_clear():
    rng = np.random.default_rng(99)
    checked = 0
    for i in range(30):
        grid = random_grid(rng, size=16, density=0.25)
        anchors = rng.uniform(0.02, 15.98, size=(10, 2))
        offsets = rng.uniform(-4.0, 4.0, size=(10, 2))
        for anchor, offset in zip(anchors, offsets):
            a = (float(anchor[0]), float(anchor[1]))
            b = (min(15.98, max(0.02, a[0] + float(offset[0]))), min(15.98, max(0.02, a[1] + float(offset[1]))))
            if math.dist(a, b) < 1e-6:
                continue
            if not (grid.point_traversable(a) and grid.point_traversable(b)):
                continue
            if line_of_sight(grid, a, b):
                checked += 1
                for p in segment_points(a, b, 0.05):
                    assert grid.point_traversable(p), f"clear segment {a}->{b} clips at {p}"
    assert checked > 20


def test_string_pull_keeps_endpoints_and_shortens():
    grid = make_grid(["....", "....", "....", "...."])
    pts = [(0.5, 0.5), (1.5, 0.5), (2.5, 0.5), (3.5, 0.5), (3.5, 1.5), (3.5, 2.5)]
    pulled = _string_pull(grid, pts)
    assert pulled[0] == pts[0] and pulled[-1] == pts[-1]
    assert len(pulled) <= len(pts)
    assert polyline_length(pulled) <= polyline_length(pts) + 1e-9


# --- polyline helpers ----------------------------------------------------------

def test_polyline_length_and_point_at():
    pts = [(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)]
    assert polyline_length(pts) == pytest.approx(7.0)
    assert point_at(pts, 0.0) == (0.0, 0.0)
    assert point_at(pts, 3.0) == (3.0, 0.0)
    assert point_at(pts, 5.0) == pytest.approx((3.0, 2.0))
    assert point_at(pts, 99.0) == (3.0, 4.0)
    assert point_at(pts, -1.0) == (0.0, 0.0)


def test_point_at_skips_zero_segments():
    pts = [(0.0, 0.0), (0.0, 0.0), (2.0, 0.0)]
    assert point_at(pts, 1.0) == pytest.approx((1.0, 0.0))
    with pytest.raises(ValueError):
        point_at([], 1.0)


# --- plan_path on the real museum ----------------------------------------------

@pytest.fixture(scope="module")
def museum_graph(world):
    return OctileGraph(grid_blocked_rows(world.grid))


def test_plan_path_to_every_artwork_matches_oracle(world, museum_graph):
    spawn_cell = world.grid.cell_of(world.spawn)
    dist = museum_graph.distances(spawn_cell)
    res = world.grid.resolution
    for art in world.artworks:
        path = plan_path(world, world.spawn, art)
        gx, gy = world.viewing_cells[art.id]
        oracle_m = dist[gy * museum_graph.width + gx] * res
        assert path.length == pytest.approx(oracle_m, abs=1e-9), art.id
        assert path.waypoints[0] == world.grid.center_of(spawn_cell)
        assert path.waypoints[-1] == world.grid.center_of((gx, gy))
        assert path.smoothed[0] == path.waypoints[0]
        assert path.smoothed[-1] == path.waypoints[-1]
        assert path.smoothed_length <= path.length + 1e-9


def test_plan_path_waypoints_are_adjacent_cells(world):
    art = world.artwork("painting 007")
    path = plan_path(world, world.spawn, art)
    cells = [world.grid.cell_of(p) for p in path.waypoints]
    assert_valid_cell_path(world.grid, cells)
    assert octile_length(cells) * world.grid.resolution == pytest.approx(path.length, abs=1e-9)


def test_fifty_navigations_never_clip(world, museum_graph):
    rng = np.random.default_rng(4242)
    res = world.grid.resolution
    ids = [a.id for a in world.artworks]
    for _ in range(50):
        src, dst = rng.choice(ids, size=2, replace=False)
        start = world.viewing_point(src)
        path = plan_path(world, start, world.artwork(dst))

        start_cell = world.grid.cell_of(start)
        gx, gy = world.viewing_cells[dst]
        oracle_m = museum_graph.distances(start_cell)[gy * museum_graph.width + gx] * res
        assert path.length == pytest.approx(oracle_m, abs=1e-9), f"{src} -> {dst}"

        for a, b in zip(path.smoothed, path.smoothed[1:]):
            for p in segment_points(a, b, 0.05):
                assert world.grid.point_traversable(p), f"{src}->{dst} clips at {p}"


def test_plan_path_rejects_blocked_start(world):
    art = world.artwork("painting 000")
    with pytest.raises(ValueError):
        plan_path(world, (11.0, 10.0), art)  # inside a column


def test_plan_path_unreachable_artwork(world):
    art = world.artwork("painting 000")
    crippled = dataclasses.replace(world, viewing_cells={})
    with pytest.raises(Unreachable) as err:
        plan_path(crippled, world.spawn, art)
    assert err.value.artwork_id == "painting 000"


# --- follow kinematics ----------------------------------------------------------

def make_session():
    return Session(id="k", visitor_pos=(0.0, 0.0), guide_pos=(0.0, 0.0))


def test_advance_guide_leads_visitor_follows():
    s = make_session()
    line = [(0.0, 0.0), (10.0, 0.0)]
    done = advance(s, line, dt=0.5, speed=2.0)
    assert not done
    assert s.guide_pos == pytest.approx((1.0, 0.0))
    assert s.visitor_pos == pytest.approx((0.0, 0.0))  # follow gap not yet open
    advance(s, line, dt=0.5, speed=2.0)
    assert s.guide_pos == pytest.approx((2.0, 0.0))
    assert s.visitor_pos == pytest.approx((1.0, 0.0))
    assert s.guide_s - s.visitor_s == pytest.approx(FOLLOW_DISTANCE)


def test_advance_arrival_at_exact_tick():
    s = make_session()
    line = [(0.0, 0.0), (10.0, 0.0)]
    ticks = 0
    while not advance(s, line, dt=0.1, speed=DEFAULT_SPEED):
        ticks += 1
        assert ticks < 10_000
    total_time = (ticks + 1) * 0.1
    expected = 10.0 / DEFAULT_SPEED
    assert expected <= total_time <= expected + 0.1 + 1e-9
    assert s.guide_pos == pytest.approx((10.0, 0.0))
    assert 10.0 - s.visitor_s <= ARRIVE_RADIUS


def test_advance_short_path_arrives_immediately():
    s = make_session()
    done = advance(s, [(0.0, 0.0), (0.4, 0.0)], dt=1.0, speed=1.2)
    assert done
    assert s.guide_pos == pytest.approx((0.4, 0.0))


def test_advance_rejects_bad_args():
    s = make_session()
    with pytest.raises(ValueError):
        advance(s, [(0.0, 0.0), (1.0, 0.0)], dt=0.0, speed=1.0)
    with pytest.raises(ValueError):
        advance(s, [(0.0, 0.0), (1.0, 0.0)], dt=0.1, speed=-1.0)


@settings(max_examples=60, deadline=None)
@given(
    length=st.floats(min_value=2.0, max_value=60.0),
    speed=st.floats(min_value=0.3, max_value=3.0),
    dt=st.floats(min_value=0.02, max_value=0.5),
)
def test_advance_arrival_within_window(length, speed, dt):
    s = make_session()
    line = [(0.0, 0.0), (length, 0.0)]
    ticks = 0
    while not advance(s, line, dt=dt, speed=speed):
        ticks += 1
        assert ticks * dt < length / speed + 10 * dt
    elapsed = (ticks + 1) * dt
    assert length / speed - 1e-6 <= elapsed <= length / speed + dt + 1e-6


# --- signpost -------------------------------------------------------------------

def test_signpost_compass_points():
    assert signpost((0.0, 0.0), (0.0, 5.0)).bearing == pytest.approx(0.0)
    assert signpost((0.0, 0.0), (5.0, 0.0)).bearing == pytest.approx(math.pi / 2)
    assert signpost((0.0, 0.0), (0.0, -5.0)).bearing == pytest.approx(math.pi)
    assert signpost((0.0, 0.0), (-5.0, 0.0)).bearing == pytest.approx(-math.pi / 2)
    assert signpost((1.0, 1.0), (4.0, 5.0)).distance == pytest.approx(5.0)


def test_signpost_never_returns_negative_pi():
    state = signpost((0.0, 0.0), (-0.0, -3.0))
    assert state.bearing == pytest.approx(math.pi)
    assert -math.pi < state.bearing <= math.pi


def test_signpost_degenerate():
    with pytest.raises(DegenerateDirection):
        signpost((1.0, 2.0), (1.0, 2.0))


@settings(max_examples=150, deadline=None)
@given(
    vx=st.floats(min_value=-50, max_value=50),
    vy=st.floats(min_value=-50, max_value=50),
    dx=st.floats(min_value=-50, max_value=50),
    dy=st.floats(min_value=-50, max_value=50),
)
def test_signpost_matches_rotation_oracle(vx, vy, dx, dy):
    if math.hypot(dx - vx, dy - vy) < 1e-9:
        return
    state = signpost((vx, vy), (dx, dy))
    assert -math.pi < state.bearing <= math.pi + 1e-12
    assert state.bearing == pytest.approx(bearing_cw_from_north(dx - vx, dy - vy), abs=1e-9)
    assert state.distance == pytest.approx(math.hypot(dx - vx, dy - vy))


# --- minimap --------------------------------------------------------------------

def test_minimap_marker_normalized(world):
    s = Session(id="m", visitor_pos=(0.0, 0.0), guide_pos=(0.0, 0.0))
    state = minimap(world, s)
    assert state.marker == pytest.approx((0.5, 0.5))
    assert not state.visible

    w, h = world.bounds
    s.visitor_pos = (-w / 2, -h / 2)
    assert minimap(world, s).marker == pytest.approx((0.0, 0.0))
    s.visitor_pos = (w, h)  # outside; clamped
    assert minimap(world, s).marker == (1.0, 1.0)


def test_minimap_visible_only_while_walking(world):
    s = Session(id="m", visitor_pos=(0.0, 0.0), guide_pos=(0.0, 0.0))
    assert not minimap(world, s).visible
    s.set_walk("painting 000", [(0.0, 0.0), (1.0, 0.0)], [])
    assert minimap(world, s).visible


def test_record_trail_caps_history(world):
    s = Session(id="m", visitor_pos=(0.0, 0.0), guide_pos=(0.0, 0.0))
    record_trail(world, s)
    assert s.minimap_trail == []  # idle: nothing recorded
    s.set_walk("painting 000", [(0.0, 0.0), (1.0, 0.0)], [])
    for i in range(TRAIL_LIMIT + 50):
        s.visitor_pos = (i * 0.01, 0.0)
        record_trail(world, s)
    assert len(s.minimap_trail) == TRAIL_LIMIT
    state = minimap(world, s)
    assert len(state.trail) == TRAIL_LIMIT
    assert state.trail[-1] == pytest.approx(state.marker)
