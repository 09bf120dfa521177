"""Stage 1, context identification: what the visitor wants and what data it needs.

The Classifier maps an utterance onto one or more interaction tasks (plus a
summary marker); the Compiler names the information kinds that answering
requires. Slot materialization then resolves those kinds into concrete prompt
text (positions, artwork records, popularity tables) deterministically from
the world model, so scripted-backend runs are bit-reproducible.
"""

from __future__ import annotations

import enum
import logging
import re
from dataclasses import dataclass

from .gateway import ChatExchange, PromptTemplate, RepairFailed, complete, extract_json, render
from .session import Session, Stage, infer_stage
from .world import Artwork, MuseumWorld, StatsStore, normalize_name

log = logging.getLogger(__name__)

CANDIDATE_LIMIT = 8


class TaskKind(enum.Enum):
    INFORMATION_ENHANCEMENT = "information enhancement"
    PERSONALIZED_PREFERENCE = "personalized preference"
    NAVIGATION = "navigation"


class InfoKind(enum.Enum):
    SPATIAL = "spatial"
    SEMANTIC = "semantic"
    SOCIAL = "social"


DEFAULT_TASKS = frozenset({TaskKind.INFORMATION_ENHANCEMENT})

_TASK_ALIASES = {
    "information enhancement": TaskKind.INFORMATION_ENHANCEMENT,
    "information_enhancement": TaskKind.INFORMATION_ENHANCEMENT,
    "personalized preference": TaskKind.PERSONALIZED_PREFERENCE,
    "personalized_preference": TaskKind.PERSONALIZED_PREFERENCE,
    "navigation": TaskKind.NAVIGATION,
}

_INFO_ALIASES = {
    "spatial": InfoKind.SPATIAL,
    "semantic": InfoKind.SEMANTIC,
    "social": InfoKind.SOCIAL,
}

_SELF_REFERENCE_RE = re.compile(r"\b(this|that|current) (painting|artwork|one|piece)\b", re.IGNORECASE)


@dataclass
class ContextFrame:
    """Everything stage 2 needs to answer one utterance."""

    utterance: str
    tasks: set[TaskKind]
    info: set[InfoKind]
    stage: Stage
    related: dict[str, str]
    summary_intent: bool
    candidates: tuple[Artwork, ...] = ()


def position_text(session: Session) -> str:
    x, y = session.visitor_pos
    return f"({float(x)}, {float(session.visitor_height)}, {float(y)})"


def input_frame(session: Session, world: MuseumWorld, utterance: str) -> str:
    """User-turn text mirroring the session snapshot the bots answer from."""
    landmark = session.landmark if session.landmark else "none"
    return (
        f"Question: {utterance}\n"
        f"Position: {position_text(session)}\n"
        f"Landmark: {landmark}\n"
        f"History: {session.history!r}"
    )


# ---------------------------------------------------------------------------
# Classifier


def _parse_tasks(raw: str) -> tuple[set[TaskKind], bool]:
    tasks: set[TaskKind] = set()
    summary = False
    labels: list = []
    try:
        value = extract_json(raw)
        if isinstance(value, dict):
            labels = value.get("tasks", [])
            summary = bool(value.get("summary", False))
        elif isinstance(value, list):
            labels = value
    except RepairFailed:
        lowered = raw.lower()
        labels = [label for label in _TASK_ALIASES if label in lowered]
        summary = "summary" in lowered and "true" in lowered
    for label in labels:
        kind = _TASK_ALIASES.get(str(label).strip().lower())
        if kind is not None:
            tasks.add(kind)
        else:
            log.info("classifier emitted unknown task label %r, dropped", label)
    if not tasks:
        tasks = set(DEFAULT_TASKS)
    return tasks, summary


def classify(backend, templates: dict[str, PromptTemplate], utterance: str, session: Session) -> tuple[set[TaskKind], bool]:
    """Tasks named by the Classifier plus its summary marker."""
    if not utterance.strip():
        raise ValueError("utterance must be non-empty")
    system = render(templates["classifier"], {"stage": ""})
    ask = f"Classify the visitor request into the task categories.\nVisitor request: {utterance}"
    raw = complete(backend, ChatExchange(system=system, turns=[("user", ask)], temperature=0.2, want_json=True))
    return _parse_tasks(raw)


# ---------------------------------------------------------------------------
# Compiler


def _parse_info(raw: str) -> set[InfoKind]:
    labels: list = []
    try:
        value = extract_json(raw)
        if isinstance(value, dict):
            labels = value.get("info", value.get("information", []))
        elif isinstance(value, list):
            labels = value
    except RepairFailed:
        lowered = raw.lower()
        labels = [label for label in _INFO_ALIASES if label in lowered]
    kinds = set()
    for label in labels:
        kind = _INFO_ALIASES.get(str(label).strip().lower())
        if kind is not None:
            kinds.add(kind)
        else:
            log.info("compiler emitted unknown info label %r, dropped", label)
    return kinds


def named_artworks(world: MuseumWorld, utterance: str, session: Session) -> list[Artwork]:
    """Artworks explicitly mentioned, in order of first mention.

    Matches whole normalized names or ids; 'this painting' and friends
    resolve to the current landmark.
    """
    padded = f" {normalize_name(utterance)} "
    found: list[tuple[int, Artwork]] = []
    for art in sorted(world.artworks, key=lambda a: a.id):
        for key in (art.name, art.id):
            idx = padded.find(f" {normalize_name(key)} ")
            if idx >= 0:
                found.append((idx, art))
                break
    if session.landmark and _SELF_REFERENCE_RE.search(utterance):
        current = world.artwork(session.landmark)
        if current is not None and all(a.id != current.id for _, a in found):
            found.append((padded.find(f" {normalize_name(current.name)} "), current))
    found.sort(key=lambda pair: (pair[0] if pair[0] >= 0 else 10**9, pair[1].id))
    return [art for _, art in found]


def resolve_candidates(
    world: MuseumWorld,
    utterance: str,
    session: Session,
    info: set[InfoKind],
) -> list[Artwork]:
    candidates = named_artworks(world, utterance, session)
    seen = {a.id for a in candidates}
    if InfoKind.SOCIAL in info:
        ranked = sorted(world.artworks, key=lambda a: (-a.popularity, a.id))[:CANDIDATE_LIMIT]
        for art in ranked:
            if art.id not in seen:
                candidates.append(art)
                seen.add(art.id)
    if InfoKind.SPATIAL in info and not candidates:
        nearest = sorted(
            world.artworks,
            key=lambda a: ((a.floor_pos[0] - session.visitor_pos[0]) ** 2 + (a.floor_pos[1] - session.visitor_pos[1]) ** 2, a.id),
        )[:CANDIDATE_LIMIT]
        for art in nearest:
            if art.id not in seen:
                candidates.append(art)
                seen.add(art.id)
    return candidates


def _artwork_position_text(art: Artwork) -> str:
    x, h, z = art.position
    fx, fy = art.facing
    return f"{art.id} | {art.name} | position ({float(x)}, {float(h)}, {float(z)}) | facing ({float(fx)}, {float(fy)})"


def _artwork_record_text(art: Artwork) -> str:
    return f"{art.id} | {art.name} | {art.author} | {art.year} | {art.style} | {art.description}"


def _artwork_social_text(art: Artwork, stats: StatsStore | None) -> str:
    visits = stats.visits(art.id) if stats is not None else 0
    return f"{art.id} | {art.name} | popularity {art.popularity} | visits this session pool {visits}"


def materialize_slots(
    info: set[InfoKind],
    candidates: list[Artwork],
    session: Session,
    world: MuseumWorld,
    stats: StatsStore | None = None,
) -> dict[str, str]:
    """Deterministic related-slot text for the given info kinds."""
    landmark_art = world.artwork(session.landmark) if session.landmark else None
    related: dict[str, str] = {
        "visitor_position": position_text(session),
        "landmark": f"{landmark_art.name} ({landmark_art.id})" if landmark_art else "none",
        "history": repr(session.history) if session.history else "[]",
        "preferences": "; ".join(session.preferences) if session.preferences else "none",
    }
    sections: list[str] = []
    if InfoKind.SEMANTIC in info:
        rows = [_artwork_record_text(a) for a in candidates] or ["none on record"]
        related["semantic"] = "\n".join(rows)
        sections.append("Artworks:\n" + related["semantic"])
    if InfoKind.SPATIAL in info:
        rows = [_artwork_position_text(a) for a in candidates] or ["none on record"]
        related["spatial"] = "\n".join(rows)
        sections.append(
            "Positions:\n" + related["spatial"] + f"\nVisitor position: {related['visitor_position']}"
        )
    if InfoKind.SOCIAL in info:
        ranked = sorted(candidates, key=lambda a: (-a.popularity, a.id))
        rows = [_artwork_social_text(a, stats) for a in ranked] or ["none on record"]
        related["social"] = "\n".join(rows)
        sections.append("Popularity:\n" + related["social"])
    related["related_info"] = "\n\n".join(sections) if sections else "none"
    return related


def compile_info(
    backend,
    templates: dict[str, PromptTemplate],
    utterance: str,
    tasks: set[TaskKind],
    session: Session,
    world: MuseumWorld,
    stats: StatsStore | None = None,
) -> tuple[set[InfoKind], dict[str, str], list[Artwork]]:
    """Info kinds named by the Compiler plus materialized related slots."""
    if not tasks:
        raise ValueError("tasks must be non-empty")
    system = render(templates["compiler"], {"stage": ""})
    ask = f"List the information kinds required for this request.\nVisitor request: {utterance}"
    raw = complete(backend, ChatExchange(system=system, turns=[("user", ask)], temperature=0.2, want_json=True))
    info = _parse_info(raw)
    candidates = resolve_candidates(world, utterance, session, info)
    related = materialize_slots(info, candidates, session, world, stats)
    return info, related, candidates


def build_frame(
    backend,
    templates: dict[str, PromptTemplate],
    utterance: str,
    session: Session,
    world: MuseumWorld,
    stats: StatsStore | None = None,
) -> ContextFrame:
    """Run both stage-1 bots and assemble the context frame."""
    tasks, summary_intent = classify(backend, templates, utterance, session)
    stage = infer_stage(session, summary_intent)
    info, related, candidates = compile_info(backend, templates, utterance, tasks, session, world, stats)
    return ContextFrame(
        utterance=utterance,
        tasks=tasks,
        info=info,
        stage=stage,
        related=related,
        summary_intent=summary_intent,
        candidates=tuple(candidates),
    )
