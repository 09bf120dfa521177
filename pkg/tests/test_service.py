"""HTTP endpoints, the websocket protocol, and offline replay helpers."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from wander.config import Config
from wander.service import check_turn, create_app, dumps, pose_message, run_script
from wander.engine import TickResult


@pytest.fixture()
def service_config(config):
    # fast wall clock so walking finishes in test time
    return Config(
        museum=config.museum,
        prompt_dir=config.prompt_dir,
        rules=config.rules,
        mode="scripted",
        time_scale=50.0,
    )


@pytest.fixture()
def client(service_config):
    app = create_app(service_config)
    with TestClient(app) as client:
        client.app = app
        yield client


def recv(ws) -> dict:
    return json.loads(ws.receive_text())


def recv_until(ws, mtype: str, limit: int = 5000) -> tuple[dict, list[dict]]:
    """Read until a message of the given type shows up; keep what preceded it."""
    seen = []
    for _ in range(limit):
        msg = recv(ws)
        if msg["type"] == mtype:
            return msg, seen
        seen.append(msg)
    raise AssertionError(f"no {mtype!r} message within {limit} reads")


def test_healthz(client):
    response = client.get("/healthz")
    assert response.status_code == 200
    assert response.json() == {"ok": True}


def test_museum_endpoint_returns_source_document(client, service_config):
    with open(service_config.museum, "r", encoding="utf-8") as fh:
        on_disk = json.load(fh)
    response = client.get("/museum")
    assert response.status_code == 200
    assert response.json() == on_disk


def test_hello_is_first_message(client, world):
    with client.websocket_connect("/session") as ws:
        hello = recv(ws)
    assert hello["type"] == "hello"
    assert hello["seq"] == 1
    assert hello["spawn"] == list(world.spawn)
    assert hello["speed"] == pytest.approx(1.2)
    assert isinstance(hello["session"], str) and len(hello["session"]) == 12


def test_feedback_echoes_request_seq(client):
    with client.websocket_connect("/session") as ws:
        recv(ws)
        ws.send_text(json.dumps({"type": "utterance", "seq": 7, "text": "How many paintings are in this museum?"}))
        msg = recv(ws)
    assert msg["type"] == "feedback"
    assert msg["re"] == 7
    assert msg["bundle"]["combo"] == "C2"
    assert msg["bundle"]["voice"]


def test_navigation_streams_pose_then_arrival(client):
    with client.websocket_connect("/session") as ws:
        recv(ws)
        ws.send_text(json.dumps({"type": "utterance", "seq": 1, "text": "Take me to the Mona Lisa."}))
        feedback = recv(ws)
        assert feedback["type"] == "feedback"
        assert feedback["bundle"]["combo"] == "C5"
        arrival, before = recv_until(ws, "arrival")
    assert arrival["artwork"] == "painting 000"
    poses = [m for m in before if m["type"] == "pose"]
    assert poses, "expected pose telemetry while walking"
    # the very last pose is the arrival tick, which already reports idle
    assert all(pose["walking"] is True for pose in poses[:-1])
    for pose in poses:
        assert len(pose["guide"]) == 2 and len(pose["visitor"]) == 2
    for pose in (p for p in poses if p["walking"]):
        assert "minimap" in pose and "signpost" in pose
        mx, my = pose["minimap"]["marker"]
        assert 0.0 <= mx <= 1.0 and 0.0 <= my <= 1.0
        assert pose["minimap"]["visible"] is True


def test_malformed_json_yields_error(client):
    with client.websocket_connect("/session") as ws:
        recv(ws)
        ws.send_text("{this is not json")
        msg = recv(ws)
    assert msg["type"] == "error"
    assert msg["re"] is None
    assert "malformed" in msg["reason"]


def test_non_object_message_yields_error(client):
    with client.websocket_connect("/session") as ws:
        recv(ws)
        ws.send_text("[1,2,3]")
        msg = recv(ws)
    assert msg["type"] == "error"
    assert "malformed" in msg["reason"]


def test_unknown_type_yields_error(client):
    with client.websocket_connect("/session") as ws:
        recv(ws)
        ws.send_text(json.dumps({"type": "bogus", "seq": 3}))
        msg = recv(ws)
    assert msg["type"] == "error"
    assert msg["re"] == 3
    assert "unknown type" in msg["reason"]


def test_empty_utterance_yields_error(client):
    with client.websocket_connect("/session") as ws:
        recv(ws)
        ws.send_text(json.dumps({"type": "utterance", "seq": 4, "text": "   "}))
        msg = recv(ws)
    assert msg["type"] == "error"
    assert msg["re"] == 4
    assert "empty" in msg["reason"]


def test_select_unknown_artwork_yields_error(client):
    with client.websocket_connect("/session") as ws:
        recv(ws)
        ws.send_text(json.dumps({"type": "select", "seq": 5, "artwork": "p999"}))
        msg = recv(ws)
    assert msg["type"] == "error"
    assert msg["re"] == 5
    assert msg["reason"] == "unknown artwork"


def test_select_introduces_artwork(client):
    with client.websocket_connect("/session") as ws:
        recv(ws)
        ws.send_text(json.dumps({"type": "select", "seq": 6, "artwork": "The Starry Night"}))
        msg = recv(ws)
    assert msg["type"] == "feedback"
    assert msg["re"] == 6
    assert msg["bundle"]["combo"] == "C2"
    assert msg["bundle"]["text_window"]


def test_server_seq_strictly_increases(client):
    with client.websocket_connect("/session") as ws:
        seqs = [recv(ws)["seq"]]
        for n, text in enumerate(["Tell me about the Mona Lisa.", "How many paintings are here?"]):
            ws.send_text(json.dumps({"type": "utterance", "seq": n, "text": text}))
            seqs.append(recv(ws)["seq"])
    assert seqs == sorted(seqs)
    assert len(set(seqs)) == len(seqs)


def test_two_sessions_are_isolated(client):
    with client.websocket_connect("/session") as ws1, client.websocket_connect("/session") as ws2:
        hello1, hello2 = recv(ws1), recv(ws2)
        assert hello1["session"] != hello2["session"]
        # first session starts walking; second session's next message must be
        # its own feedback, not someone else's telemetry
        ws1.send_text(json.dumps({"type": "utterance", "seq": 1, "text": "Take me to the Mona Lisa."}))
        assert recv(ws1)["type"] == "feedback"
        ws2.send_text(json.dumps({"type": "utterance", "seq": 1, "text": "How many paintings are in this museum?"}))
        msg = recv(ws2)
    assert msg["type"] == "feedback"
    assert msg["re"] == 1
    assert msg["bundle"]["combo"] == "C2"


def test_new_utterance_supersedes_pending_one(client):
    engine = client.app.state.engine
    original = engine.handle_utterance
    calls = []

    def slow(session, text):
        calls.append(text)
        if len(calls) == 1:
            time.sleep(0.5)
        return original(session, text)

    engine.handle_utterance = slow
    try:
        with client.websocket_connect("/session") as ws:
            recv(ws)
            ws.send_text(json.dumps({"type": "utterance", "seq": 1, "text": "Tell me about the Mona Lisa."}))
            ws.send_text(json.dumps({"type": "utterance", "seq": 2, "text": "How many paintings are in this museum?"}))
            first, second = recv(ws), recv(ws)
    finally:
        engine.handle_utterance = original
    assert first["type"] == "error"
    assert first["re"] == 1
    assert first["reason"] == "superseded"
    assert second["type"] == "feedback"
    assert second["re"] == 2


def test_session_survives_engine_exception(client, monkeypatch):
    engine = client.app.state.engine

    def boom(session, text):
        raise RuntimeError("stage blew up")

    monkeypatch.setattr(engine, "handle_utterance", boom)
    with client.websocket_connect("/session") as ws:
        recv(ws)
        ws.send_text(json.dumps({"type": "utterance", "seq": 9, "text": "hello"}))
        msg = recv(ws)
        assert msg["type"] == "error"
        assert msg["re"] == 9
        assert "stage blew up" in msg["reason"]
        monkeypatch.undo()
        ws.send_text(json.dumps({"type": "utterance", "seq": 10, "text": "How many paintings are here?"}))
        msg = recv(ws)
    assert msg["type"] == "feedback"
    assert msg["re"] == 10


def test_static_dir_serves_client_bundle(service_config, tmp_path):
    (tmp_path / "index.html").write_text("<html><body>wander</body></html>")
    config = Config(
        museum=service_config.museum,
        prompt_dir=service_config.prompt_dir,
        rules=service_config.rules,
        static_dir=str(tmp_path),
    )
    with TestClient(create_app(config)) as client:
        response = client.get("/")
        assert response.status_code == 200
        assert "wander" in response.text
        # API routes registered before the mount still win
        assert client.get("/healthz").json() == {"ok": True}
        # The "/" mount must not swallow websocket upgrades
        with client.websocket_connect("/session") as ws:
            assert recv(ws)["type"] == "hello"


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'


def test_pose_message_shapes():
    bare = TickResult(guide=(1.0, 2.0), visitor=(3.0, 4.0), walking=False)
    assert pose_message(bare) == {
        "type": "pose",
        "guide": [1.0, 2.0],
        "visitor": [3.0, 4.0],
        "walking": False,
    }
    rich = TickResult(
        guide=(1.0, 2.0),
        visitor=(3.0, 4.0),
        walking=True,
        minimap={"visible": True},
        signpost={"direction": 0.0},
    )
    msg = pose_message(rich)
    assert msg["minimap"] == {"visible": True}
    assert msg["signpost"] == {"direction": 0.0}


def test_check_turn_reports_mismatches(engine, session):
    turn = engine.handle_utterance(session, "How many paintings are in this museum?")
    assert check_turn({"combo": "C2"}, turn) == []
    failures = check_turn(
        {"combo": "C5", "voice_contains": "zebra", "tours": ["p009"]}, turn
    )
    assert len(failures) == 3


def test_run_script_is_deterministic(service_config):
    script = [
        {"utterance": "Take me to the Mona Lisa.", "ticks": 40},
        {"utterance": "How many paintings are in this museum?", "ticks": 5},
    ]
    first = run_script(service_config, script)
    second = run_script(service_config, script)
    assert first == second
    kinds = [json.loads(line)["type"] for line in first]
    assert kinds[0] == "feedback"
    assert "pose" in kinds
