"""Spatial computation: grid pathfinding, follow kinematics, signpost, minimap.

Paths are shortest routes on the inflated 8-connected occupancy grid (octile
costs, no cutting of blocked corners). The raw cell-center chain is kept for
length guarantees; a string-pulled polyline drives the avatars.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .session import Session
from .world import Artwork, MuseumWorld, OccupancyGrid

SQRT2 = math.sqrt(2.0)

DEFAULT_SPEED = 1.2  # m/s, guide walking speed
FOLLOW_DISTANCE = 1.0  # visitor trails the guide by this arc length
ARRIVE_RADIUS = 1.5  # visitor must be this close to the goal at arrival
TRAIL_LIMIT = 200

Vec2 = tuple[float, float]


class Unreachable(Exception):
    def __init__(self, artwork_id: str):
        super().__init__(f"no traversable route to {artwork_id}")
        self.artwork_id = artwork_id


class DegenerateDirection(ValueError):
    pass


@dataclass(frozen=True)
class Path:
    """waypoints: raw A* cell centers (consecutive cells 8-adjacent);
    length: octile grid length in meters; smoothed: string-pulled polyline."""

    waypoints: tuple[Vec2, ...]
    length: float
    smoothed: tuple[Vec2, ...]
    smoothed_length: float


@dataclass(frozen=True)
class SignpostState:
    bearing: float  # radians in (-pi, pi], clockwise from +y axis
    distance: float

    def to_json(self) -> dict:
        return {"bearing": self.bearing, "distance": self.distance}


@dataclass(frozen=True)
class MinimapState:
    visible: bool
    marker: Vec2  # normalized (u, v) in [0, 1]^2
    trail: tuple[Vec2, ...]

    def to_json(self) -> dict:
        return {
            "visible": self.visible,
            "marker": list(self.marker),
            "trail": [list(p) for p in self.trail],
        }


# 8-neighborhood in fixed order for deterministic tie-breaking
_NEIGHBORS = (
    (1, 0, 1.0),
    (-1, 0, 1.0),
    (0, 1, 1.0),
    (0, -1, 1.0),
    (1, 1, SQRT2),
    (1, -1, SQRT2),
    (-1, 1, SQRT2),
    (-1, -1, SQRT2),
)


def octile(a: tuple[int, int], b: tuple[int, int]) -> float:
    dx = abs(a[0] - b[0])
    dy = abs(a[1] - b[1])
    return (dx + dy) + (SQRT2 - 2.0) * min(dx, dy)


def _astar(grid: OccupancyGrid, start: tuple[int, int], goal: tuple[int, int]) -> list[tuple[int, int]] | None:
    """Cell path from start to goal, or None. Costs in cells (1 / sqrt 2)."""
    if not grid.is_traversable(start) or not grid.is_traversable(goal):
        return None
    if start == goal:
        return [start]
    g_score = {start: 0.0}
    came: dict[tuple[int, int], tuple[int, int]] = {}
    counter = 0
    open_heap = [(octile(start, goal), 0, start)]
    closed: set[tuple[int, int]] = set()
    while open_heap:
        _, _, cell = heapq.heappop(open_heap)
        if cell == goal:
            path = [cell]
            while cell in came:
                cell = came[cell]
                path.append(cell)
            path.reverse()
            return path
        if cell in closed:
            continue
        closed.add(cell)
        cx, cy = cell
        base = g_score[cell]
        for dx, dy, step in _NEIGHBORS:
            nxt = (cx + dx, cy + dy)
            if not grid.is_traversable(nxt):
                continue
            # a diagonal move must not cut a blocked corner
            if dx and dy and not (grid.is_traversable((cx + dx, cy)) and grid.is_traversable((cx, cy + dy))):
                continue
            tentative = base + step
            if tentative < g_score.get(nxt, math.inf) - 1e-12:
                g_score[nxt] = tentative
                came[nxt] = cell
                counter += 1
                heapq.heappush(open_heap, (tentative + octile(nxt, goal), counter, nxt))
    return None


def line_of_sight(grid: OccupancyGrid, a: Vec2, b: Vec2) -> bool:
    """True when the segment a-b crosses only traversable cells.

    Supercover traversal: every cell the segment touches is visited, and
    corner crossings require both adjacent cells to be open (same rule as
    diagonal A* steps).
    """
    ax, ay = grid.cell_of(a)
    bx, by = grid.cell_of(b)
    x, y = ax, ay
    if not grid.is_traversable((x, y)):
        return False
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    step_x = 1 if dx > 0 else -1
    step_y = 1 if dy > 0 else -1
    # parametric distance to the next vertical / horizontal cell boundary
    res = grid.resolution
    ox, oy = grid.origin
    if dx != 0:
        next_vx = ox + (x + (1 if step_x > 0 else 0)) * res
        t_max_x = (next_vx - a[0]) / dx
        t_dx = res / abs(dx)
    else:
        t_max_x, t_dx = math.inf, math.inf
    if dy != 0:
        next_vy = oy + (y + (1 if step_y > 0 else 0)) * res
        t_max_y = (next_vy - a[1]) / dy
        t_dy = res / abs(dy)
    else:
        t_max_y, t_dy = math.inf, math.inf

    while (x, y) != (bx, by):
        if abs(t_max_x - t_max_y) < 1e-12:
            # exact corner: both orthogonal neighbors must be open
            if not (grid.is_traversable((x + step_x, y)) and grid.is_traversable((x, y + step_y))):
                return False
            x += step_x
            y += step_y
            t_max_x += t_dx
            t_max_y += t_dy
        elif t_max_x < t_max_y:
            x += step_x
            t_max_x += t_dx
        else:
            y += step_y
            t_max_y += t_dy
        if t_max_x == math.inf and t_max_y == math.inf and (x, y) != (bx, by):
            return False  # degenerate segment that never reaches b
        if not grid.is_traversable((x, y)):
            return False
    return True


def _string_pull(grid: OccupancyGrid, points: list[Vec2]) -> list[Vec2]:
    """Drop interior waypoints whose bypass segment is collision-free."""
    if len(points) <= 2:
        return list(points)
    pulled = [points[0]]
    anchor = 0
    k = 1
    while k < len(points) - 1:
        if line_of_sight(grid, points[anchor], points[k + 1]):
            k += 1
            continue
        pulled.append(points[k])
        anchor = k
        k += 1
    pulled.append(points[-1])
    return pulled


def polyline_length(points: list[Vec2] | tuple[Vec2, ...]) -> float:
    return sum(math.dist(points[i], points[i + 1]) for i in range(len(points) - 1))


def point_at(points: list[Vec2] | tuple[Vec2, ...], s: float) -> Vec2:
    """Point at arc length s along the polyline, clamped to its ends."""
    if not points:
        raise ValueError("empty polyline")
    if s <= 0:
        return points[0]
    remaining = s
    for i in range(len(points) - 1):
        seg = math.dist(points[i], points[i + 1])
        if remaining <= seg:
            if seg == 0:
                continue
            t = remaining / seg
            ax, ay = points[i]
            bx, by = points[i + 1]
            return (ax + (bx - ax) * t, ay + (by - ay) * t)
        remaining -= seg
    return points[-1]


def plan_path(world: MuseumWorld, start: Vec2, artwork: Artwork) -> Path:
    """Shortest collision-free route from start to the artwork's viewing cell."""
    grid = world.grid
    start_cell = grid.cell_of(start)
    if not grid.is_traversable(start_cell):
        raise ValueError(f"start position {start} is not traversable")
    goal_cell = world.viewing_cells.get(artwork.id)
    if goal_cell is None:
        raise Unreachable(artwork.id)
    cells = _astar(grid, start_cell, goal_cell)
    if cells is None:
        raise Unreachable(artwork.id)
    waypoints = [grid.center_of(c) for c in cells]
    length = octile_length(cells) * grid.resolution
    smoothed = _string_pull(grid, waypoints)
    return Path(
        waypoints=tuple(waypoints),
        length=length,
        smoothed=tuple(smoothed),
        smoothed_length=polyline_length(smoothed),
    )


def octile_length(cells: list[tuple[int, int]]) -> float:
    total = 0.0
    for i in range(len(cells) - 1):
        dx = abs(cells[i + 1][0] - cells[i][0])
        dy = abs(cells[i + 1][1] - cells[i][1])
        total += SQRT2 if dx and dy else 1.0
    return total


def advance(session: Session, polyline: list[Vec2] | tuple[Vec2, ...], dt: float, speed: float) -> bool:
    """Move the guide along the polyline by speed*dt with the visitor in tow.

    Returns True when the guide has reached the end and the visitor is within
    arrival radius of it.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if speed <= 0:
        raise ValueError("speed must be positive")
    total = polyline_length(polyline)
    session.guide_s = min(total, session.guide_s + speed * dt)
    session.visitor_s = max(0.0, session.guide_s - FOLLOW_DISTANCE)
    session.guide_pos = point_at(polyline, session.guide_s)
    session.visitor_pos = point_at(polyline, session.visitor_s)
    return session.guide_s >= total and (total - session.visitor_s) <= ARRIVE_RADIUS


def signpost(visitor: Vec2, dest: Vec2) -> SignpostState:
    """Bearing from visitor toward dest, clockwise from the +y axis, (-pi, pi]."""
    dx = dest[0] - visitor[0]
    dy = dest[1] - visitor[1]
    distance = math.hypot(dx, dy)
    if distance < 1e-12:
        raise DegenerateDirection("visitor and destination coincide")
    bearing = math.atan2(dx, dy)
    if bearing <= -math.pi:
        bearing = math.pi
    return SignpostState(bearing=bearing, distance=distance)


def minimap(world: MuseumWorld, session: Session) -> MinimapState:
    x0, y0, w, h = world.floor_rect
    x, y = session.visitor_pos
    marker = ((x - x0) / w, (y - y0) / h)
    marker = (min(1.0, max(0.0, marker[0])), min(1.0, max(0.0, marker[1])))
    return MinimapState(
        visible=session.walking,
        marker=marker,
        trail=tuple(session.minimap_trail[-TRAIL_LIMIT:]),
    )


def record_trail(world: MuseumWorld, session: Session) -> None:
    """Append the visitor's minimap marker while walking; capped history."""
    if not session.walking:
        return
    state = minimap(world, session)
    session.minimap_trail.append(state.marker)
    if len(session.minimap_trail) > TRAIL_LIMIT:
        del session.minimap_trail[: len(session.minimap_trail) - TRAIL_LIMIT]
