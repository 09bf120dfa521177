"""Session server: HTTP endpoints, the websocket wire protocol, the tick
loop, plus offline transcript replay used by tests and the CLI.

Wire messages are JSON with a per-direction strictly increasing ``seq``.
Client → server: ``utterance`` (text), ``select`` (artwork id or name).
Server → client: ``hello``, ``feedback`` (with ``re`` = request seq),
``pose`` (stream while walking), ``arrival``, ``error``.
"""

from __future__ import annotations

import asyncio
import json
import logging
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from .config import Config
from .engine import TickResult, TourEngine
from .gateway import load_templates, make_backend
from .session import Session
from .world import MuseumWorld, StatsStore, find_artwork, load_museum

log = logging.getLogger(__name__)


def build_engine(config: Config) -> tuple[TourEngine, MuseumWorld]:
    world = load_museum(config.museum)
    templates = load_templates(config.prompt_dir)
    backend = make_backend(config.mode, config.rules)
    engine = TourEngine(
        world,
        templates,
        backend,
        stats=StatsStore(world),
        speed=config.speed,
        speech_rate=config.speech_rate,
    )
    return engine, world


def dumps(payload: dict) -> str:
    """Canonical wire serialization (sorted keys, no float noise)."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def pose_message(result: TickResult) -> dict:
    msg = {
        "type": "pose",
        "guide": [result.guide[0], result.guide[1]],
        "visitor": [result.visitor[0], result.visitor[1]],
        "walking": result.walking,
    }
    if result.minimap is not None:
        msg["minimap"] = result.minimap
    if result.signpost is not None:
        msg["signpost"] = result.signpost
    return msg


def create_app(config: Config):
    engine, world = build_engine(config)
    app = FastAPI(title="wander")
    app.state.engine = engine
    app.state.world = world
    app.state.config = config

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    @app.get("/museum")
    def museum():
        return JSONResponse(content=world.source)

    @app.websocket("/session")
    async def session_socket(ws: WebSocket):
        await ws.accept()
        conn = Connection(engine, world, config, ws)
        await conn.run()

    if config.static_dir:
        from fastapi.staticfiles import StaticFiles

        # Mounted last: a "/" mount matches websocket scopes too and would
        # otherwise swallow the /session upgrade.
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="static")

    return app


class Connection:
    """One websocket session: receive loop plus a fixed-step ticker task."""

    def __init__(self, engine: TourEngine, world: MuseumWorld, config: Config, ws):
        self.engine = engine
        self.world = world
        self.config = config
        self.ws = ws
        self.session = Session(
            id=uuid.uuid4().hex[:12], visitor_pos=world.spawn, guide_pos=world.spawn
        )
        self.seq_out = 0
        self.lock = asyncio.Lock()
        self.send_lock = asyncio.Lock()
        self.engine_lock = asyncio.Lock()  # one engine call per session at a time
        self.generation = 0  # bumped per utterance; stale completions are dropped
        self.pending: asyncio.Task | None = None

    async def send(self, payload: dict) -> None:
        # seq must appear on the wire in increasing order across tasks
        async with self.send_lock:
            self.seq_out += 1
            payload["seq"] = self.seq_out
            await self.ws.send_text(dumps(payload))

    async def run(self) -> None:
        await self.send(
            {
                "type": "hello",
                "session": self.session.id,
                "spawn": list(self.world.spawn),
                "speed": self.config.speed,
            }
        )
        ticker = asyncio.create_task(self._ticker())
        try:
            while True:
                text = await self.ws.receive_text()
                await self._handle_raw(text)
        except WebSocketDisconnect:
            pass
        finally:
            ticker.cancel()
            if self.pending is not None:
                self.pending.cancel()

    async def _ticker(self) -> None:
        dt = self.config.tick_dt
        while True:
            await asyncio.sleep(dt / self.config.time_scale)
            async with self.lock:
                if not self.session.walking:
                    continue
                result = self.engine.tick(self.session, dt)
            await self.send(pose_message(result))
            if result.arrived:
                await self.send({"type": "arrival", "artwork": result.arrived})

    async def _handle_raw(self, text: str) -> None:
        try:
            msg = json.loads(text)
            if not isinstance(msg, dict):
                raise ValueError("message must be a JSON object")
            mtype = msg.get("type")
            seq = msg.get("seq")
        except (json.JSONDecodeError, ValueError) as exc:
            await self.send({"type": "error", "re": None, "reason": f"malformed message: {exc}"})
            return
        if mtype == "utterance":
            utterance = str(msg.get("text", ""))
        elif mtype == "select":
            art = find_artwork(self.world, str(msg.get("artwork", "")))
            if art is None:
                await self.send({"type": "error", "re": seq, "reason": "unknown artwork"})
                return
            utterance = f"introduce {art.name}"
        else:
            await self.send({"type": "error", "re": seq, "reason": f"unknown type {mtype!r}"})
            return
        if not utterance.strip():
            await self.send({"type": "error", "re": seq, "reason": "empty utterance"})
            return

        # a new utterance supersedes one still being answered: the stale
        # call finishes (threads cannot be interrupted) but its reply is
        # replaced by an error so request/response pairing stays intact
        self.generation += 1
        self.pending = asyncio.create_task(self._answer(utterance, seq, self.generation))

    async def _answer(self, utterance: str, seq, generation: int) -> None:
        try:
            async with self.engine_lock:
                async with self.lock:
                    self.session.stop_walk()
                if generation != self.generation:
                    await self.send({"type": "error", "re": seq, "reason": "superseded"})
                    return
                # gateway work happens off the tick path
                turn = await asyncio.to_thread(self.engine.handle_utterance, self.session, utterance)
            if generation != self.generation:
                await self.send({"type": "error", "re": seq, "reason": "superseded"})
                return
            await self.send({"type": "feedback", "re": seq, "bundle": turn.bundle.to_json()})
        except Exception as exc:  # malformed input must not kill the session
            log.exception("utterance handling failed")
            await self.send({"type": "error", "re": seq, "reason": str(exc)})


def serve(config: Config) -> None:
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


# ---------------------------------------------------------------------------
# Offline replay


@dataclass
class TurnReport:
    index: int
    utterance: str
    ok: bool
    failures: list[str] = field(default_factory=list)


def _apply_session_state(session: Session, state: dict, world: MuseumWorld) -> None:
    position = state.get("position")
    if position is not None:
        if len(position) == 3:
            session.visitor_pos = (float(position[0]), float(position[2]))
            session.visitor_height = float(position[1])
        else:
            session.visitor_pos = (float(position[0]), float(position[1]))
        session.guide_pos = session.visitor_pos
    if "landmark" in state:
        session.landmark = state["landmark"]
    if "history" in state:
        session.history = list(state["history"])
    if "preferences" in state:
        session.preferences = list(state["preferences"])


def check_turn(expect: dict, turn) -> list[str]:
    failures = []
    bundle = turn.bundle
    resp = turn.response
    if "combo" in expect and bundle.combo != expect["combo"]:
        failures.append(f"combo {bundle.combo} != {expect['combo']}")
    if "tours" in expect:
        got = list(resp.tours or ()) if resp else []
        if got != list(expect["tours"]):
            failures.append(f"tours {got} != {expect['tours']}")
    if "virtual_screen" in expect:
        got = bundle.virtual_screen or []
        if got != list(expect["virtual_screen"]):
            failures.append(f"virtual_screen {got} != {expect['virtual_screen']}")
    if "virtual_screen_contains" in expect:
        got = bundle.virtual_screen or []
        for needle in expect["virtual_screen_contains"]:
            if needle not in got:
                failures.append(f"virtual_screen missing {needle}")
    if "landmark" in expect:
        got_landmark = resp.landmark if resp else None
        if got_landmark != expect["landmark"]:
            failures.append(f"landmark {got_landmark!r} != {expect['landmark']!r}")
    if "voice_contains" in expect:
        if expect["voice_contains"].lower() not in bundle.voice.lower():
            failures.append(f"voice missing {expect['voice_contains']!r}")
    return failures


def replay(transcript_path: str, config: Config, out=print) -> int:
    """Run a transcript against the pipeline; 0 exit iff every turn passes."""
    with open(transcript_path, "r", encoding="utf-8") as fh:
        transcript = json.load(fh)
    turns = transcript.get("turns", [])
    if not turns:
        out("warning: empty transcript, nothing to replay")
        return 0
    engine, world = build_engine(config)
    session = Session(id="replay", visitor_pos=world.spawn, guide_pos=world.spawn)
    all_ok = True
    for index, spec_turn in enumerate(turns, start=1):
        if "session" in spec_turn:
            session = Session(id=f"replay-{index}", visitor_pos=world.spawn, guide_pos=world.spawn)
            _apply_session_state(session, spec_turn["session"], world)
        turn = engine.handle_utterance(session, spec_turn["utterance"])
        failures = check_turn(spec_turn.get("expect", {}), turn)
        status = "PASS" if not failures else "FAIL"
        out(f"[{status}] turn {index}: {spec_turn['utterance']}")
        for failure in failures:
            out(f"       {failure}")
        all_ok = all_ok and not failures
    out(f"{'all turns passed' if all_ok else 'replay failed'} ({len(turns)} turns)")
    return 0 if all_ok else 1


def run_script(config: Config, script: list[dict]) -> list[str]:
    """Drive a fresh engine with a message script under the virtual clock.

    Script items: {"utterance": text} or {"ticks": n}. Returns the full
    ordered wire-message list (feedback + pose + arrival), serialized
    canonically; used to check end-to-end determinism.
    """
    engine, world = build_engine(config)
    session = Session(id="script", visitor_pos=world.spawn, guide_pos=world.spawn)
    out: list[str] = []
    for item in script:
        if "utterance" in item:
            turn = engine.handle_utterance(session, item["utterance"])
            out.append(dumps({"type": "feedback", "bundle": turn.bundle.to_json()}))
        for _ in range(int(item.get("ticks", 0))):
            result = engine.tick(session, config.tick_dt)
            if result.walking or result.arrived:
                out.append(dumps(pose_message(result)))
            if result.arrived:
                out.append(dumps({"type": "arrival", "artwork": result.arrived}))
    return out
