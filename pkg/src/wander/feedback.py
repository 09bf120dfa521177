"""Multi-modal feedback bundles: pick a channel combination and fill payloads.

Five fixed combinations:
  C1 voice + avatar
  C2 C1 + text window
  C3 C2 + timed region highlights on the landmark
  C4 C2 + virtual screen (artwork carousel)
  C5 voice + avatar + minimap + signpost (walking)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from . import nav
from .bots import BotResponse, IDENTIFIER, NAVIGATOR, NoResolvableTarget
from .gateway import BackendError, BackendTimeout, GatewayError, RepairFailed
from .pipeline import ContextFrame
from .session import Session
from .world import MuseumWorld

log = logging.getLogger(__name__)

SPEECH_RATE = 15.0  # characters of narration per second, for highlight timing

COMBO_CHANNELS = {
    "C1": frozenset(),
    "C2": frozenset({"text_window"}),
    "C3": frozenset({"text_window", "highlights"}),
    "C4": frozenset({"text_window", "virtual_screen"}),
    "C5": frozenset({"minimap", "signpost"}),
}

IMPORTANCE_COLORS = {3: "dark red", 2: "red", 1: "orange"}


@dataclass
class FeedbackBundle:
    combo: str
    voice: str
    avatar: dict
    echo: str
    text_window: str | None = None
    highlights: list[dict] | None = None
    virtual_screen: list[str] | None = None
    minimap: dict | None = None
    signpost: dict | None = None

    def to_json(self) -> dict:
        body = {
            "combo": self.combo,
            "voice": self.voice,
            "avatar": self.avatar,
            "echo": self.echo,
        }
        for name in ("text_window", "highlights", "virtual_screen", "minimap", "signpost"):
            value = getattr(self, name)
            if value is not None:
                body[name] = value
        return body


def select_combo(primary_bot: str, resp: BotResponse, session: Session) -> str:
    """Deterministic combination choice from the bot and its structured output."""
    if primary_bot == NAVIGATOR:
        return "C5"
    if primary_bot == IDENTIFIER:
        return "C1"
    if resp.regions:
        return "C3"
    if resp.tours and any(t != session.landmark for t in resp.tours):
        return "C4"
    return "C2"


def first_sentence(text: str) -> str:
    for stop in (". ", "! ", "? "):
        idx = text.find(stop)
        if idx > 0:
            return text[: idx + 1]
    return text


def order_by_mention(tour_ids: list[str], text: str, world: MuseumWorld) -> list[str]:
    """Sort ids by where their artwork is first mentioned in the text.

    Unmentioned ids keep their original relative order, after the mentioned
    ones.
    """
    lowered = text.lower()
    keyed: list[tuple[int, int, str]] = []
    for idx, art_id in enumerate(tour_ids):
        art = world.artwork(art_id)
        pos = -1
        if art is not None:
            pos = lowered.find(art.name.lower())
            if pos < 0 and art.name.lower().startswith("the "):
                pos = lowered.find(art.name.lower()[4:])
            if pos < 0:
                pos = lowered.find(art_id.lower())
        keyed.append((pos if pos >= 0 else 10**9, idx, art_id))
    keyed.sort()
    return [art_id for _, _, art_id in keyed]


def _highlight_payload(resp: BotResponse, session: Session, world: MuseumWorld, speech_rate: float) -> list[dict]:
    art = world.artwork(session.landmark) if session.landmark else None
    if art is None or not resp.regions:
        return []
    voice = resp.response.lower()
    rows = []
    for name, importance in resp.regions:
        region = art.region_named(name)
        if region is None:
            continue
        at = voice.find(name.lower())
        offset = (at if at >= 0 else len(voice)) / speech_rate
        rows.append(
            {
                "artwork": art.id,
                "region": region.name,
                "rect": list(region.rect),
                "color": IMPORTANCE_COLORS.get(importance, "orange"),
                "reveal_at": round(offset, 3),
            }
        )
    rows.sort(key=lambda r: r["reveal_at"])
    return rows


def _avatar_payload(combo: str, resp: BotResponse, session: Session, world: MuseumWorld) -> dict:
    if combo == "C5":
        target = resp.tours[0] if resp.tours else None
        return {"pose": "walk", "target": target, "face_visitor": False}
    art = world.artwork(session.landmark) if session.landmark else None
    if art is not None and combo in ("C2", "C3"):
        mentioned = art.name.lower() in resp.response.lower()
        if combo == "C3" or mentioned or (resp.landmark and resp.landmark.lower() == art.name.lower()):
            return {"pose": "point", "target": art.id, "face_visitor": False}
    return {"pose": "speak", "target": None, "face_visitor": True}


def compose(
    frame: ContextFrame,
    primary_bot: str,
    resp: BotResponse,
    session: Session,
    world: MuseumWorld,
    speech_rate: float = SPEECH_RATE,
) -> FeedbackBundle:
    """Build the full bundle for a validated bot response."""
    combo = select_combo(primary_bot, resp, session)
    channels = COMBO_CHANNELS[combo]
    voice = resp.response
    bundle = FeedbackBundle(
        combo=combo,
        voice=voice,
        avatar=_avatar_payload(combo, resp, session, world),
        echo=frame.utterance,
    )
    if "text_window" in channels:
        bundle.text_window = resp.context if resp.context else first_sentence(voice)
    if "highlights" in channels:
        bundle.highlights = _highlight_payload(resp, session, world, speech_rate)
    if "virtual_screen" in channels:
        source = resp.context if resp.context else voice
        bundle.virtual_screen = order_by_mention(list(resp.tours or ()), source, world)
    if "minimap" in channels:
        bundle.minimap = nav.minimap(world, session).to_json()
    if "signpost" in channels:
        bundle.signpost = _signpost_payload(resp, session, world)
    return bundle


def _signpost_payload(resp: BotResponse, session: Session, world: MuseumWorld) -> dict:
    dest = None
    if resp.tours:
        dest = world.viewing_point(resp.tours[0])
    if dest is None:
        return {"bearing": 0.0, "distance": 0.0}
    try:
        return nav.signpost(session.visitor_pos, dest).to_json()
    except nav.DegenerateDirection:
        return {"bearing": 0.0, "distance": 0.0}


def fallback(utterance: str, failure: Exception, session: Session | None = None) -> FeedbackBundle:
    """C1 bundle for gateway/parse/grounding failures; never raises."""
    sid = session.id if session is not None else "?"
    log.warning("falling back to C1 for session %s: %s", sid, failure)
    if isinstance(failure, NoResolvableTarget):
        voice = (
            f"I could not work out where to take you from \"{failure.request}\". "
            "Could you name one of the paintings?"
        )
    elif isinstance(failure, RepairFailed) and failure.raw.strip():
        voice = failure.raw.strip()
    elif isinstance(failure, (BackendTimeout, BackendError, GatewayError, RepairFailed)):
        voice = "I did not catch that. Could you ask again?"
    else:
        voice = "Something went wrong on my side. Could you ask again?"
    return FeedbackBundle(
        combo="C1",
        voice=voice,
        avatar={"pose": "speak", "target": None, "face_visitor": True},
        echo=utterance,
    )


def degraded_to_fallback(utterance: str, resp: BotResponse, session: Session) -> FeedbackBundle:
    """Route a degraded (unparseable) bot response through the C1 path."""
    raw = resp.response if resp.response.strip() else resp.raw
    return fallback(utterance, RepairFailed(raw), session)
