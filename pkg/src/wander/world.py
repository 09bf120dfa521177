"""Museum content: artworks, floor geometry, occupancy grid, social statistics.

The museum is a single JSON document (see ``load_museum``). The floor plane is
a 2D coordinate system (x, y) in meters, centered on the origin: a bounds
rectangle of w x h spans [-w/2, w/2] x [-h/2, h/2]. Artwork positions are
3-vectors [x, height, y] in the museum frame; all spatial reasoning happens on
their floor projection (x, y).

The occupancy grid is derived deterministically from bounds + obstacles at a
fixed resolution, with blocked cells inflated by the agent radius so paths
planned on the grid keep clearance from walls.
"""

from __future__ import annotations

import json
import math
import re
import threading
import unicodedata
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import binary_dilation
from shapely.geometry import Point, Polygon, box

GRID_RESOLUTION = 0.25  # meters per cell
AGENT_RADIUS = 0.3  # meters; inflation ring = ceil(radius / resolution) cells
VIEWING_RANGE = 2.0  # max distance from artwork to its viewing cell
SCHEMA_VERSION = 1


class ParseError(ValueError):
    """Museum file is unreadable or not in the expected schema."""


class ValidationError(ValueError):
    """Museum content violates an invariant; the message names the entity."""


@dataclass(frozen=True)
class Region:
    """Named rectangular region of interest in artwork image space.

    ``rect`` is (x, y, w, h), each normalized to [0, 1].
    """

    name: str
    rect: tuple[float, float, float, float]
    note: str = ""


@dataclass(frozen=True)
class Artwork:
    id: str
    name: str
    author: str
    year: int
    style: str
    description: str
    position: tuple[float, float, float]  # (x, height, y) museum frame
    facing: tuple[float, float]  # unit wall normal on the floor plane
    regions: tuple[Region, ...] = ()
    popularity: float = 0.0
    visit_count: int = 0  # authored baseline; live counts live in StatsStore

    @property
    def floor_pos(self) -> tuple[float, float]:
        return (self.position[0], self.position[2])

    def region_named(self, name: str) -> Region | None:
        wanted = normalize_name(name)
        for region in self.regions:
            if normalize_name(region.name) == wanted:
                return region
        return None


@dataclass
class OccupancyGrid:
    """Boolean traversability raster over the floor rectangle."""

    resolution: float
    width: int
    height: int
    origin: tuple[float, float]  # floor coords of cell (0, 0)'s lower corner
    blocked: np.ndarray  # shape (height, width), True = blocked

    def cell_of(self, point: tuple[float, float]) -> tuple[int, int]:
        cx = int(math.floor((point[0] - self.origin[0]) / self.resolution))
        cy = int(math.floor((point[1] - self.origin[1]) / self.resolution))
        return (cx, cy)

    def center_of(self, cell: tuple[int, int]) -> tuple[float, float]:
        return (
            self.origin[0] + (cell[0] + 0.5) * self.resolution,
            self.origin[1] + (cell[1] + 0.5) * self.resolution,
        )

    def in_bounds(self, cell: tuple[int, int]) -> bool:
        return 0 <= cell[0] < self.width and 0 <= cell[1] < self.height

    def is_traversable(self, cell: tuple[int, int]) -> bool:
        return self.in_bounds(cell) and not self.blocked[cell[1], cell[0]]

    def point_traversable(self, point: tuple[float, float]) -> bool:
        return self.is_traversable(self.cell_of(point))


@dataclass
class MuseumWorld:
    """Immutable after load; safe to share across sessions."""

    bounds: tuple[float, float]  # (w, h); floor spans [-w/2, w/2] x [-h/2, h/2]
    spawn: tuple[float, float]
    obstacles: list[list[tuple[float, float]]]
    artworks: list[Artwork]
    grid: OccupancyGrid
    viewing_cells: dict[str, tuple[int, int]]
    source: dict = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        self._by_id = {a.id: a for a in self.artworks}
        self._by_name: dict[str, list[Artwork]] = {}
        for a in self.artworks:
            self._by_name.setdefault(normalize_name(a.name), []).append(a)

    @property
    def floor_rect(self) -> tuple[float, float, float, float]:
        """(x0, y0, w, h) of the floor rectangle."""
        w, h = self.bounds
        return (-w / 2.0, -h / 2.0, w, h)

    def artwork(self, artwork_id: str) -> Artwork | None:
        return self._by_id.get(artwork_id)

    def viewing_point(self, artwork_id: str) -> tuple[float, float]:
        return self.grid.center_of(self.viewing_cells[artwork_id])

    def to_json(self) -> str:
        """Canonical serialization of the loaded content (not the grid)."""
        return json.dumps(self.source, sort_keys=True, separators=(",", ":"))


class StatsStore:
    """Mutable per-world visit statistics; increments are atomic."""

    def __init__(self, world: MuseumWorld):
        self._lock = threading.Lock()
        self._visits = {a.id: a.visit_count for a in world.artworks}

    def record_visit(self, artwork_id: str) -> int:
        with self._lock:
            self._visits[artwork_id] = self._visits.get(artwork_id, 0) + 1
            return self._visits[artwork_id]

    def visits(self, artwork_id: str) -> int:
        with self._lock:
            return self._visits.get(artwork_id, 0)

    def snapshot(self) -> dict[str, int]:
        with self._lock:
            return dict(self._visits)


_PUNCT_RE = re.compile(r"[^\w\s]", re.UNICODE)
_WS_RE = re.compile(r"\s+")


def normalize_name(text: str) -> str:
    """Casefold, strip punctuation, collapse whitespace."""
    text = unicodedata.normalize("NFKC", text).casefold()
    text = _PUNCT_RE.sub(" ", text)
    return _WS_RE.sub(" ", text).strip()


def find_artwork(world: MuseumWorld, query: str) -> Artwork | None:
    """Resolve a name or id from bot output. None when nothing matches.

    Exact-id match wins; otherwise normalized name (or id) match, ties broken
    by lowest id.
    """
    art = world.artwork(query)
    if art is not None:
        return art
    wanted = normalize_name(query)
    if not wanted:
        return None
    candidates = list(world._by_name.get(wanted, []))
    candidates += [a for a in world.artworks if normalize_name(a.id) == wanted]
    if not candidates:
        return None
    return min(candidates, key=lambda a: a.id)


def artworks_by_filter(
    world: MuseumWorld,
    style: str | None = None,
    author: str | None = None,
    sort_by: str = "id",
    origin: tuple[float, float] | None = None,
    limit: int = 8,
) -> list[Artwork]:
    """Filter and order artworks. ``sort_by`` is popularity, distance or id.

    Popularity sorts descending (most popular first); distance ascending from
    ``origin``; ties always break by id so the ordering is stable.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    if sort_by not in ("popularity", "distance", "id"):
        raise ValueError(f"unknown sort_by: {sort_by!r}")
    if sort_by == "distance" and origin is None:
        raise ValueError("distance sort requires an origin point")

    picked = [
        a
        for a in world.artworks
        if (style is None or normalize_name(a.style) == normalize_name(style))
        and (author is None or normalize_name(a.author) == normalize_name(author))
    ]
    if sort_by == "popularity":
        picked.sort(key=lambda a: (-a.popularity, a.id))
    elif sort_by == "distance":
        picked.sort(key=lambda a: (math.dist(a.floor_pos, origin), a.id))
    else:
        picked.sort(key=lambda a: a.id)
    return picked[:limit]


def _require(data: dict, key: str, where: str):
    if key not in data:
        raise ParseError(f"{where}: missing required key {key!r}")
    return data[key]


def _parse_artwork(raw: dict, index: int) -> Artwork:
    where = f"artworks[{index}]"
    art_id = _require(raw, "id", where)
    where = f"artwork {art_id!r}"
    try:
        position = tuple(float(v) for v in _require(raw, "position", where))
        facing = tuple(float(v) for v in _require(raw, "facing", where))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: bad position/facing: {exc}") from exc
    if len(position) != 3:
        raise ParseError(f"{where}: position must be a 3-vector")
    if len(facing) != 2:
        raise ParseError(f"{where}: facing must be a 2-vector")
    regions = []
    seen_regions = set()
    for r in raw.get("regions", []):
        rect = tuple(float(v) for v in _require(r, "rect", f"{where} region"))
        name = _require(r, "name", f"{where} region")
        if len(rect) != 4:
            raise ParseError(f"{where}: region {name!r} rect must be (x, y, w, h)")
        x, y, w, h = rect
        if x < 0 or y < 0 or x + w > 1 + 1e-9 or y + h > 1 + 1e-9 or w < 0 or h < 0:
            raise ValidationError(f"{where}: region {name!r} rect outside [0,1]")
        if normalize_name(name) in seen_regions:
            raise ValidationError(f"{where}: duplicate region name {name!r}")
        seen_regions.add(normalize_name(name))
        regions.append(Region(name=name, rect=rect, note=r.get("note", "")))
    art = Artwork(
        id=art_id,
        name=_require(raw, "name", where),
        author=raw.get("author", ""),
        year=int(raw.get("year", 0)),
        style=raw.get("style", ""),
        description=raw.get("description", ""),
        position=position,
        facing=facing,
        regions=tuple(regions),
        popularity=float(raw.get("popularity", 0.0)),
        visit_count=int(raw.get("visit_count", 0)),
    )
    norm = math.hypot(*art.facing)
    if abs(norm - 1.0) > 1e-6:
        raise ValidationError(f"{where}: facing must have unit norm, got {norm:.6f}")
    if art.popularity < 0:
        raise ValidationError(f"{where}: popularity must be >= 0")
    if art.visit_count < 0:
        raise ValidationError(f"{where}: visit_count must be >= 0")
    return art


def _build_grid(
    bounds: tuple[float, float],
    obstacles: list[list[tuple[float, float]]],
    resolution: float = GRID_RESOLUTION,
) -> OccupancyGrid:
    w, h = bounds
    width = int(math.ceil(w / resolution))
    height = int(math.ceil(h / resolution))
    origin = (-w / 2.0, -h / 2.0)
    blocked = np.zeros((height, width), dtype=bool)

    for poly_points in obstacles:
        poly = Polygon(poly_points)
        if not poly.is_valid or poly.area <= 0:
            raise ValidationError(f"obstacle polygon {poly_points!r} is degenerate")
        minx, miny, maxx, maxy = poly.bounds
        cx0 = max(0, int((minx - origin[0]) / resolution) - 1)
        cy0 = max(0, int((miny - origin[1]) / resolution) - 1)
        cx1 = min(width - 1, int((maxx - origin[0]) / resolution) + 1)
        cy1 = min(height - 1, int((maxy - origin[1]) / resolution) + 1)
        for cy in range(cy0, cy1 + 1):
            for cx in range(cx0, cx1 + 1):
                cell_box = box(
                    origin[0] + cx * resolution,
                    origin[1] + cy * resolution,
                    origin[0] + (cx + 1) * resolution,
                    origin[1] + (cy + 1) * resolution,
                )
                if poly.intersects(cell_box):
                    blocked[cy, cx] = True

    inflate = int(math.ceil(AGENT_RADIUS / resolution))
    if inflate > 0 and blocked.any():
        structure = np.ones((2 * inflate + 1, 2 * inflate + 1), dtype=bool)
        blocked = binary_dilation(blocked, structure=structure)

    return OccupancyGrid(
        resolution=resolution,
        width=width,
        height=height,
        origin=origin,
        blocked=blocked,
    )


def _viewing_cell(grid: OccupancyGrid, art: Artwork) -> tuple[int, int] | None:
    """Nearest traversable cell within viewing range, in front of the artwork."""
    pos = art.floor_pos
    reach = int(math.ceil(VIEWING_RANGE / grid.resolution)) + 1
    cx0, cy0 = grid.cell_of(pos)
    best: tuple[float, int, int] | None = None
    best_front: tuple[float, int, int] | None = None
    for cy in range(cy0 - reach, cy0 + reach + 1):
        for cx in range(cx0 - reach, cx0 + reach + 1):
            if not grid.is_traversable((cx, cy)):
                continue
            center = grid.center_of((cx, cy))
            dist = math.dist(center, pos)
            if dist > VIEWING_RANGE:
                continue
            key = (dist, cy, cx)
            front = (center[0] - pos[0]) * art.facing[0] + (center[1] - pos[1]) * art.facing[1]
            if front > 1e-9 and (best_front is None or key < best_front):
                best_front = key
            if best is None or key < best:
                best = key
    chosen = best_front or best
    return None if chosen is None else (chosen[2], chosen[1])


def _flood_reachable(grid: OccupancyGrid, start: tuple[int, int]) -> np.ndarray:
    """4-connected flood fill; matches reachability under non-corner-cutting paths."""
    reached = np.zeros_like(grid.blocked)
    if not grid.is_traversable(start):
        return reached
    stack = [start]
    reached[start[1], start[0]] = True
    while stack:
        cx, cy = stack.pop()
        for nx, ny in ((cx + 1, cy), (cx - 1, cy), (cx, cy + 1), (cx, cy - 1)):
            if grid.is_traversable((nx, ny)) and not reached[ny, nx]:
                reached[ny, nx] = True
                stack.append((nx, ny))
    return reached


def build_world(data: dict) -> MuseumWorld:
    """Validate parsed museum content and derive the occupancy grid."""
    if data.get("schema") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema version: {data.get('schema')!r}")
    bounds_raw = _require(data, "bounds", "museum")
    bounds = (float(_require(bounds_raw, "w", "bounds")), float(_require(bounds_raw, "h", "bounds")))
    if bounds[0] <= 0 or bounds[1] <= 0:
        raise ValidationError("bounds must be positive")
    spawn = tuple(float(v) for v in _require(data, "spawn", "museum"))
    if len(spawn) != 2:
        raise ParseError("spawn must be a 2-vector")
    obstacles = [
        [(float(p[0]), float(p[1])) for p in poly]
        for poly in data.get("obstacles", [])
    ]
    artworks = [_parse_artwork(raw, i) for i, raw in enumerate(_require(data, "artworks", "museum"))]

    ids = [a.id for a in artworks]
    for dup in {i for i in ids if ids.count(i) > 1}:
        raise ValidationError(f"duplicate artwork id {dup!r}")

    x0, y0, w, h = -bounds[0] / 2, -bounds[1] / 2, bounds[0], bounds[1]
    for art in artworks:
        fx, fy = art.floor_pos
        if not (x0 <= fx <= x0 + w and y0 <= fy <= y0 + h):
            raise ValidationError(f"artwork {art.id!r} position outside museum bounds")
        for poly_points in obstacles:
            if Polygon(poly_points).contains(Point(fx, fy)):
                raise ValidationError(f"artwork {art.id!r} placed inside an obstacle polygon")

    grid = _build_grid(bounds, obstacles)
    spawn_cell = grid.cell_of(spawn)
    if not grid.is_traversable(spawn_cell):
        raise ValidationError(f"spawn {spawn!r} is not on a traversable cell")

    viewing_cells: dict[str, tuple[int, int]] = {}
    for art in artworks:
        cell = _viewing_cell(grid, art)
        if cell is None:
            raise ValidationError(f"artwork {art.id!r} has no traversable viewing cell within {VIEWING_RANGE} m")
        viewing_cells[art.id] = cell

    reached = _flood_reachable(grid, spawn_cell)
    for art in artworks:
        vx, vy = viewing_cells[art.id]
        if not reached[vy, vx]:
            raise ValidationError(f"artwork {art.id!r} viewing cell unreachable from spawn")

    return MuseumWorld(
        bounds=bounds,
        spawn=spawn,
        obstacles=obstacles,
        artworks=artworks,
        grid=grid,
        viewing_cells=viewing_cells,
        source=data,
    )


def load_museum(path: str) -> MuseumWorld:
    """Load and validate a museum JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read museum file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed museum file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"museum file {path} must contain a JSON object")
    return build_world(data)
