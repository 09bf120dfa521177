"""Per-visitor tour state: position, landmark, history, preferences, stage.

A session is owned by one logical event loop; every mutation happens in
utterance/tick order and is mirrored into an append-only event log so the
whole session can be replayed as a pure fold over events.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import IO

from .world import MuseumWorld, StatsStore


class UnknownArtwork(KeyError):
    pass


class EmptyStatement(ValueError):
    pass


class Stage(enum.Enum):
    BEGINNING = "beginning"
    IN_PROGRESS = "in progress"
    ENDING = "ending"


@dataclass
class Session:
    id: str
    visitor_pos: tuple[float, float]
    guide_pos: tuple[float, float]
    visitor_height: float = 1.7  # eye height used when rendering 3-vector positions
    landmark: str | None = None
    history: list[str] = field(default_factory=list)
    preferences: list[str] = field(default_factory=list)
    planned_tour: list[str] | None = None
    conversation: list[tuple[str, str]] = field(default_factory=list)
    path: list[tuple[float, float]] | None = None  # active waypoints, None when idle
    clock: float = 0.0
    events: list[dict] = field(default_factory=list)
    event_sink: IO[str] | None = field(default=None, repr=False)

    # walk kinematics, maintained by the nav/service layer
    guide_s: float = 0.0
    visitor_s: float = 0.0
    walk_queue: list[str] = field(default_factory=list)  # remaining destination ids
    walk_target: str | None = None
    minimap_trail: list[tuple[float, float]] = field(default_factory=list)

    @property
    def walking(self) -> bool:
        return bool(self.path)

    def _log(self, ev: str, **payload) -> None:
        record = {"t": self.clock, "ev": ev, **payload}
        self.events.append(record)
        if self.event_sink is not None:
            self.event_sink.write(json.dumps(record, sort_keys=True) + "\n")
            self.event_sink.flush()

    def log_utterance(self, text: str) -> None:
        self.conversation.append(("visitor", text))
        self._log("utterance", text=text)

    def log_feedback(self, voice: str, combo: str) -> None:
        self.conversation.append(("guide", voice))
        self._log("feedback", voice=voice, combo=combo)

    def record_arrival(self, artwork_id: str, world: MuseumWorld, stats: StatsStore | None = None) -> None:
        """Arriving at an artwork: set landmark, append history, stop walking."""
        if world.artwork(artwork_id) is None:
            raise UnknownArtwork(artwork_id)
        self.landmark = artwork_id
        if not self.history or self.history[-1] != artwork_id:
            self.history.append(artwork_id)
        self.path = None
        self.walk_target = None
        self.guide_s = 0.0
        self.visitor_s = 0.0
        if stats is not None:
            stats.record_visit(artwork_id)
        self._log("arrival", artwork=artwork_id)

    def add_preference(self, statement: str) -> None:
        if not statement or not statement.strip():
            raise EmptyStatement("preference statement must be non-empty")
        self.preferences.append(statement)
        self._log("preference", statement=statement)

    def set_walk(self, target_id: str, waypoints: list[tuple[float, float]], queue: list[str]) -> None:
        self.walk_target = target_id
        self.path = waypoints
        self.walk_queue = list(queue)
        self.guide_s = 0.0
        self.visitor_s = 0.0

    def stop_walk(self) -> None:
        self.path = None
        self.walk_target = None
        self.walk_queue = []
        self.minimap_trail.clear()


def infer_stage(session: Session, summary_intent: bool) -> Stage:
    """Which phase of the visit an utterance belongs to.

    Beginning while nothing has been visited; Ending on an explicit summary
    request or once every planned stop has been seen; otherwise in progress.
    """
    if not session.history:
        return Stage.BEGINNING
    if summary_intent:
        return Stage.ENDING
    if session.planned_tour and all(a in session.history for a in session.planned_tour):
        return Stage.ENDING
    return Stage.IN_PROGRESS


def replay_events(
    session_id: str,
    events: list[dict],
    world: MuseumWorld,
    spawn: tuple[float, float] | None = None,
) -> Session:
    """Rebuild a session by folding its event log. Statistics are not replayed."""
    start = spawn if spawn is not None else world.spawn
    session = Session(id=session_id, visitor_pos=start, guide_pos=start)
    for record in events:
        session.clock = record.get("t", session.clock)
        ev = record["ev"]
        if ev == "utterance":
            session.conversation.append(("visitor", record["text"]))
        elif ev == "feedback":
            session.conversation.append(("guide", record["voice"]))
        elif ev == "arrival":
            artwork_id = record["artwork"]
            if world.artwork(artwork_id) is None:
                raise UnknownArtwork(artwork_id)
            session.landmark = artwork_id
            if not session.history or session.history[-1] != artwork_id:
                session.history.append(artwork_id)
        elif ev == "preference":
            session.preferences.append(record["statement"])
        session.events.append(dict(record))
    return session
