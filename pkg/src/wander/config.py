"""Runtime configuration: defaults, TOML/JSON file loading, env overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

# repo root when running from a source checkout or editable install
_ROOT = Path(__file__).resolve().parents[2]


def _default(rel: str) -> str:
    candidate = _ROOT / rel
    if candidate.exists():
        return str(candidate)
    return rel


@dataclass
class Config:
    museum: str = field(default_factory=lambda: _default("fixtures/museum35.json"))
    prompt_dir: str = field(default_factory=lambda: _default("prompts"))
    rules: str = field(default_factory=lambda: _default("fixtures/scripted_rules.json"))
    mode: str = "scripted"  # or "live"
    host: str = "127.0.0.1"
    port: int = 8000
    speed: float = 1.2  # guide walking speed, m/s
    tick_rate: float = 10.0  # simulation steps per second
    time_scale: float = 1.0  # >1 runs the wall-clock sleep faster than virtual time
    speech_rate: float = 15.0  # narration chars per second (highlight timing)
    static_dir: str | None = None  # optional web client bundle to serve at /

    @property
    def tick_dt(self) -> float:
        return 1.0 / self.tick_rate


def load_config(path: str | None = None, **overrides) -> Config:
    """Config from an optional TOML/JSON file, env, and keyword overrides."""
    values: dict = {}
    if path:
        raw = Path(path).read_bytes()
        if path.endswith(".json"):
            values = json.loads(raw)
        else:
            values = tomllib.loads(raw.decode("utf-8"))
    env_mode = os.environ.get("WANDER_LLM_MODE")
    if env_mode:
        values.setdefault("mode", env_mode)
    known = {f.name for f in fields(Config)}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    return Config(**values)
