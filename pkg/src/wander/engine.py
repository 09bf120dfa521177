"""Turn orchestration: one utterance in, one feedback bundle out, plus the
fixed-step tick that moves the avatars while a walk is active.

A new utterance always cancels any walk in progress. Navigator responses
start a walk to the first destination; remaining destinations queue up and
continue automatically after each arrival.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import bots, feedback, nav, pipeline
from .bots import BotResponse, NoResolvableTarget
from .gateway import GatewayError, PromptTemplate
from .nav import Path, Unreachable
from .pipeline import ContextFrame
from .session import Session
from .world import MuseumWorld, StatsStore

log = logging.getLogger(__name__)


@dataclass
class TurnResult:
    bundle: feedback.FeedbackBundle
    bot: str | None = None
    response: BotResponse | None = None
    frame: ContextFrame | None = None


@dataclass
class TickResult:
    guide: tuple[float, float]
    visitor: tuple[float, float]
    walking: bool
    minimap: dict | None = None
    signpost: dict | None = None
    arrived: str | None = None  # artwork id reached this tick
    next_leg: str | None = None  # queued destination a new walk started toward


class TourEngine:
    def __init__(
        self,
        world: MuseumWorld,
        templates: dict[str, PromptTemplate],
        backend,
        stats: StatsStore | None = None,
        speed: float = nav.DEFAULT_SPEED,
        speech_rate: float = feedback.SPEECH_RATE,
    ):
        self.world = world
        self.templates = templates
        self.backend = backend
        self.stats = stats if stats is not None else StatsStore(world)
        self.speed = speed
        self.speech_rate = speech_rate

    # -- utterance path ----------------------------------------------------

    def handle_utterance(self, session: Session, text: str) -> TurnResult:
        if not text or not text.strip():
            raise ValueError("utterance must be non-empty")
        session.log_utterance(text)
        session.stop_walk()  # a fresh request supersedes any walk in progress
        try:
            frame = pipeline.build_frame(self.backend, self.templates, text, session, self.world, self.stats)
            bot = bots.arbitrate(frame.tasks)
            resp = bots.run_bot(bot, self.backend, self.templates, frame, session, self.world)
        except (GatewayError, NoResolvableTarget) as exc:
            bundle = feedback.fallback(text, exc, session)
            session.log_feedback(bundle.voice, bundle.combo)
            return TurnResult(bundle=bundle)

        if resp.degraded:
            bundle = feedback.degraded_to_fallback(text, resp, session)
            session.log_feedback(bundle.voice, bundle.combo)
            return TurnResult(bundle=bundle, bot=bot, response=resp, frame=frame)

        if resp.tours and len(resp.tours) >= 2:
            session.planned_tour = list(resp.tours)

        if bot == bots.NAVIGATOR and resp.tours:
            try:
                self._start_walk(session, resp.tours[0], list(resp.tours[1:]))
            except Unreachable as exc:
                bundle = feedback.fallback(text, NoResolvableTarget(exc.artwork_id), session)
                session.log_feedback(bundle.voice, bundle.combo)
                return TurnResult(bundle=bundle, bot=bot, response=resp, frame=frame)

        bundle = feedback.compose(frame, bot, resp, session, self.world, self.speech_rate)
        session.log_feedback(bundle.voice, bundle.combo)
        return TurnResult(bundle=bundle, bot=bot, response=resp, frame=frame)

    def _start_walk(self, session: Session, target_id: str, queue: list[str]) -> Path:
        art = self.world.artwork(target_id)
        if art is None:
            raise Unreachable(target_id)
        path = nav.plan_path(self.world, session.guide_pos, art)
        session.set_walk(target_id, list(path.smoothed), queue)
        return path

    # -- tick path -----------------------------------------------------------

    def tick(self, session: Session, dt: float) -> TickResult:
        """Advance the virtual clock and, while walking, the avatars."""
        session.clock += dt
        if not session.walking:
            return TickResult(
                guide=session.guide_pos, visitor=session.visitor_pos, walking=False
            )
        arrived_at = None
        next_leg = None
        done = nav.advance(session, session.path, dt, self.speed)
        nav.record_trail(self.world, session)
        minimap_state = nav.minimap(self.world, session).to_json()
        signpost_state = self._tick_signpost(session)
        if done and session.walk_target:
            arrived_at = session.walk_target
            queue = list(session.walk_queue)
            session.record_arrival(arrived_at, self.world, self.stats)
            if queue:
                next_leg = queue[0]
                try:
                    self._start_walk(session, queue[0], queue[1:])
                except Unreachable:
                    log.warning("queued destination %s unreachable, stopping walk", queue[0])
                    session.stop_walk()
                    next_leg = None
            else:
                session.stop_walk()
        return TickResult(
            guide=session.guide_pos,
            visitor=session.visitor_pos,
            walking=session.walking,
            minimap=minimap_state,
            signpost=signpost_state,
            arrived=arrived_at,
            next_leg=next_leg,
        )

    def _tick_signpost(self, session: Session) -> dict | None:
        if not session.walk_target:
            return None
        dest = self.world.viewing_point(session.walk_target)
        if dest is None:
            return None
        try:
            return nav.signpost(session.visitor_pos, dest).to_json()
        except nav.DegenerateDirection:
            return {"bearing": 0.0, "distance": 0.0}
