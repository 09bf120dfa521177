"""Stage 2, feedback generation: the Explorer, Navigator, and Identifier bots.

An arbiter picks the primary bot for the classified task set (navigation
outranks information enhancement, which outranks personalized preference).
Each bot renders its template, calls the gateway, and parses the output into
a validated BotResponse; structural parse failures degrade to plain voice
instead of erroring at the visitor.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass

from .gateway import ChatExchange, GatewayError, PromptTemplate, RepairFailed, complete, extract_json, render
from .pipeline import ContextFrame, TaskKind, input_frame, named_artworks
from .session import Session
from .world import MuseumWorld, find_artwork

log = logging.getLogger(__name__)

STAGE2_TEMPERATURE = 0.7
STAGE2_MAX_TOKENS = 900

EXPLORER = "explorer"
NAVIGATOR = "navigator"
IDENTIFIER = "identifier"


class NoResolvableTarget(Exception):
    def __init__(self, request: str):
        super().__init__(f"no navigable destination found in {request!r}")
        self.request = request


@dataclass
class BotResponse:
    """Validated bot output: narration plus optional structured channels."""

    response: str
    context: str | None = None
    landmark: str | None = None
    tasks: tuple[str, ...] = ()
    tours: tuple[str, ...] | None = None  # artwork ids present in the world
    regions: tuple[tuple[str, int], ...] | None = None  # (name on landmark, importance 1..3)
    raw: str = ""
    degraded: bool = False  # structural parse failed; response carries raw text


def arbitrate(tasks: set[TaskKind]) -> str:
    """Primary bot for a task set, by fixed precedence."""
    if not tasks:
        raise ValueError("task set must be non-empty")
    if TaskKind.NAVIGATION in tasks:
        return NAVIGATOR
    if TaskKind.INFORMATION_ENHANCEMENT in tasks:
        return EXPLORER
    return IDENTIFIER


def _render_system(template: PromptTemplate, frame: ContextFrame) -> str:
    slots = dict(frame.related)
    slots["stage"] = frame.stage.value
    return render(template, slots)


def _call(backend, template: PromptTemplate, frame: ContextFrame, session: Session, world: MuseumWorld) -> str:
    exchange = ChatExchange(
        system=_render_system(template, frame),
        turns=[("user", input_frame(session, world, frame.utterance))],
        temperature=STAGE2_TEMPERATURE,
        max_tokens=STAGE2_MAX_TOKENS,
        want_json=True,
    )
    return complete(backend, exchange)


def _get(payload: dict, *names: str):
    """Case-insensitive lookup over alternative key spellings."""
    lowered = {str(k).lower(): v for k, v in payload.items()}
    for name in names:
        if name.lower() in lowered:
            return lowered[name.lower()]
    return None


def validate_tours(world: MuseumWorld, entries) -> tuple[str, ...] | None:
    """Resolve tour entries (names or ids) to existing ids, dropping the rest."""
    if entries is None:
        return None
    if isinstance(entries, str):
        entries = [entries]
    if not isinstance(entries, (list, tuple)):
        return None
    ids: list[str] = []
    for entry in entries:
        art = find_artwork(world, str(entry))
        if art is None:
            log.info("dropping unresolvable tour entry %r", entry)
            continue
        if art.id not in ids:
            ids.append(art.id)
    return tuple(ids)


def validate_regions(world: MuseumWorld, session: Session, entries) -> tuple[tuple[str, int], ...] | None:
    """Keep only regions that exist on the current landmark, importance 1..3."""
    if not entries or not session.landmark:
        return None
    art = world.artwork(session.landmark)
    if art is None:
        return None
    valid: list[tuple[str, int]] = []
    for entry in entries:
        if isinstance(entry, dict):
            name = entry.get("name")
            importance = entry.get("importance", 1)
        elif isinstance(entry, (list, tuple)) and len(entry) >= 2:
            name, importance = entry[0], entry[1]
        else:
            continue
        if name is None or art.region_named(str(name)) is None:
            log.info("dropping region %r not present on landmark %s", name, art.id)
            continue
        try:
            tier = int(importance)
        except (TypeError, ValueError):
            tier = 1
        valid.append((str(name), min(3, max(1, tier))))
    return tuple(valid) or None


def _tasks_field(payload: dict) -> tuple[str, ...]:
    value = _get(payload, "tasks")
    if isinstance(value, list):
        return tuple(str(v) for v in value)
    return ()


def _unwrap(payload):
    # models sometimes wrap the object in a one-element array
    if isinstance(payload, list) and len(payload) == 1 and isinstance(payload[0], dict):
        return payload[0]
    return payload


def run_explorer(backend, templates, frame: ContextFrame, session: Session, world: MuseumWorld) -> BotResponse:
    """Recommendations, introductions, and key-point extraction."""
    raw = _call(backend, templates[EXPLORER], frame, session, world)
    try:
        payload = _unwrap(extract_json(raw))
    except RepairFailed:
        log.warning("explorer output unparseable, degrading to plain voice")
        return BotResponse(response=raw.strip(), raw=raw, degraded=True)
    if not isinstance(payload, dict):
        return BotResponse(response=raw.strip(), raw=raw, degraded=True)
    response = _get(payload, "response", "answer", "introduction")
    context = _get(payload, "context")
    landmark = _get(payload, "landmark")
    tours = validate_tours(world, _get(payload, "tours", "tourid", "tour_id"))
    regions = validate_regions(world, session, _get(payload, "regions", "highlights"))
    return BotResponse(
        response=str(response) if response else raw.strip(),
        context=str(context) if context else None,
        landmark=str(landmark) if landmark else None,
        tasks=_tasks_field(payload),
        tours=tours,
        regions=regions,
        raw=raw,
    )


def run_navigator(backend, templates, frame: ContextFrame, session: Session, world: MuseumWorld) -> BotResponse:
    """Short walking command plus an ordered destination list."""
    raw = _call(backend, templates[NAVIGATOR], frame, session, world)
    try:
        payload = _unwrap(extract_json(raw))
    except RepairFailed:
        log.warning("navigator output unparseable, degrading to plain voice")
        return BotResponse(response=raw.strip(), raw=raw, degraded=True)
    if not isinstance(payload, dict):
        return BotResponse(response=raw.strip(), raw=raw, degraded=True)
    tours = validate_tours(world, _get(payload, "tourid", "tour_id", "tours"))
    if not tours:
        tours = validate_tours(world, _get(payload, "tour"))
    if not tours:
        # last resort: artworks named in the utterance itself
        tours = tuple(a.id for a in named_artworks(world, frame.utterance, session)) or None
    if not tours:
        raise NoResolvableTarget(frame.utterance)
    response = _get(payload, "introduction", "response")
    return BotResponse(
        response=str(response) if response else "Sure! Follow me.",
        context=_coerce_text(_get(payload, "context")),
        landmark=_coerce_text(_get(payload, "landmark")),
        tasks=_tasks_field(payload),
        tours=tours,
        raw=raw,
    )


def _coerce_text(value) -> str | None:
    return str(value) if value else None


def run_identifier(backend, templates, frame: ContextFrame, session: Session, world: MuseumWorld) -> BotResponse:
    """Natural acknowledgment of a preference; the preference is stored first."""
    session.add_preference(frame.utterance)
    # the slot snapshot predates the store; keep the prompt truthful
    related = dict(frame.related)
    related["preferences"] = "; ".join(session.preferences)
    frame = dataclasses.replace(frame, related=related)
    try:
        raw = _call(backend, templates[IDENTIFIER], frame, session, world)
    except GatewayError:
        log.warning("identifier gateway call failed, using canned acknowledgment")
        return BotResponse(response="Noted your preference.", degraded=False)
    try:
        payload = extract_json(raw)
        if isinstance(payload, dict):
            response = _get(payload, "response", "answer")
            if response:
                return BotResponse(response=str(response), tasks=_tasks_field(payload), raw=raw)
    except RepairFailed:
        pass
    # conversational bot: plain prose is a perfectly good answer
    return BotResponse(response=raw.strip(), raw=raw)


_RUNNERS = {EXPLORER: run_explorer, NAVIGATOR: run_navigator, IDENTIFIER: run_identifier}


def run_bot(name: str, backend, templates, frame: ContextFrame, session: Session, world: MuseumWorld) -> BotResponse:
    return _RUNNERS[name](backend, templates, frame, session, world)
