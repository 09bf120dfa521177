from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from wander.config import Config, load_config
from wander.engine import TourEngine
from wander.gateway import ScriptedBackend, load_templates
from wander.session import Session
from wander.world import OccupancyGrid, load_museum

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def config() -> Config:
    return load_config()


@pytest.fixture(scope="session")
def world(config):
    return load_museum(config.museum)


@pytest.fixture(scope="session")
def templates(config):
    return load_templates(config.prompt_dir)


@pytest.fixture(scope="session")
def rules(config):
    return json.loads(Path(config.rules).read_text())


@pytest.fixture()
def backend(rules):
    return ScriptedBackend(rules)


@pytest.fixture()
def engine(world, templates, backend, config):
    return TourEngine(world, templates, backend, speed=config.speed, speech_rate=config.speech_rate)


@pytest.fixture()
def session(world) -> Session:
    return Session(id="t", visitor_pos=world.spawn, guide_pos=world.spawn)


def make_grid(rows: list[str], resolution: float = 1.0) -> OccupancyGrid:
    """Build a grid from ASCII art; '#' blocks a cell. Row 0 is y=0."""
    height = len(rows)
    width = len(rows[0])
    blocked = np.zeros((height, width), dtype=bool)
    for y, row in enumerate(rows):
        assert len(row) == width, "ragged ascii grid"
        for x, ch in enumerate(row):
            blocked[y, x] = ch == "#"
    return OccupancyGrid(
        resolution=resolution,
        width=width,
        height=height,
        origin=(0.0, 0.0),
        blocked=blocked,
    )


def random_grid(rng: np.random.Generator, size: int = 32, density: float = 0.25) -> OccupancyGrid:
    blocked = rng.random((size, size)) < density
    return OccupancyGrid(resolution=1.0, width=size, height=size, origin=(0.0, 0.0), blocked=blocked)
