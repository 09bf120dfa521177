import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import wander.gateway as gateway
from wander.gateway import (
    BackendError,
    BackendTimeout,
    ChatExchange,
    LiveBackend,
    MissingSlot,
    RepairFailed,
    ScriptedBackend,
    complete,
    extract_json,
    make_backend,
    parse_template,
    render,
)

ROOT = Path(__file__).resolve().parents[1]

SAMPLE = """
[perspective]
You are a helpful guide.

[definitions]
- Alpha: first thing.
- Beta: second thing.

[task]
Answer the visitor.

[constraints]
- Always be brief.
- when stage is ending: Say goodbye.
- when stage is beginning: Say hello.

[examples]
in: hi
out: hello there

[related]
Stage: {{stage}}
Position: {{visitor_position}}
"""


def test_parse_template_sections():
    t = parse_template("sample", SAMPLE)
    assert t.perspective == "You are a helpful guide."
    assert t.definitions == ("Alpha: first thing.", "Beta: second thing.")
    assert t.task_spec == "Answer the visitor."
    assert t.constraints == (
        (None, "Always be brief."),
        ("ending", "Say goodbye."),
        ("beginning", "Say hello."),
    )
    assert t.few_shots == (("hi", "hello there"),)
    assert t.slot_names == {"stage", "visitor_position"}


def test_render_fills_slots_and_filters_guards():
    t = parse_template("sample", SAMPLE)
    out = render(t, {"stage": "ending", "visitor_position": "(1.0, 1.7, 2.0)"})
    assert "Say goodbye." in out
    assert "Say hello." not in out
    assert "Stage: ending" in out
    assert "Position: (1.0, 1.7, 2.0)" in out
    assert "{{" not in out


def test_render_missing_slot_raises():
    t = parse_template("sample", SAMPLE)
    with pytest.raises(MissingSlot) as err:
        render(t, {"stage": "ending"})
    assert err.value.name == "visitor_position"


def test_render_is_pure():
    t = parse_template("sample", SAMPLE)
    slots = {"stage": "beginning", "visitor_position": "(0.0, 1.7, 0.0)"}
    assert render(t, slots) == render(t, slots)
    assert render(t, dict(slots)) == render(t, slots)


def test_load_templates_has_all_bots(templates):
    assert set(templates) == {"classifier", "compiler", "explorer", "navigator", "identifier"}
    for t in templates.values():
        assert t.perspective


def test_stage2_templates_declare_expected_slots(templates):
    assert "stage" in templates["explorer"].slot_names
    assert "related_info" in templates["explorer"].slot_names
    assert "preferences" in templates["identifier"].slot_names


def test_scripted_backend_first_match_wins():
    backend = ScriptedBackend(
        [
            {"match": r"mona lisa", "response": "one"},
            {"match": r"mona", "response": "two"},
        ]
    )
    ex = ChatExchange(system="", turns=[("user", "Where is the MONA LISA?")])
    assert backend.complete(ex) == "one"


def test_scripted_backend_ignores_system_prompt():
    backend = ScriptedBackend([{"match": r"secret phrase", "response": "matched"}])
    ex = ChatExchange(system="the secret phrase lives here", turns=[("user", "hello")])
    with pytest.raises(BackendError):
        backend.complete(ex)


def test_scripted_backend_multiline_anchors():
    backend = ScriptedBackend([{"match": r"^question: take me\b", "response": "go"}])
    ex = ChatExchange(system="", turns=[("user", "Question: take me to the scream\nPosition: (0,0,0)")])
    assert backend.complete(ex) == "go"


def test_complete_requires_turns(backend):
    with pytest.raises(ValueError):
        complete(backend, ChatExchange(system="s", turns=[]))


class _Resp:
    def __init__(self, status_code, body=None):
        self.status_code = status_code
        self._body = body or {}

    def json(self):
        return self._body


def _ok_body(text):
    return {"choices": [{"message": {"content": text}}]}


def test_live_backend_success(monkeypatch):
    calls = []

    def fake_post(url, json=None, headers=None, timeout=None):
        calls.append((url, json, headers, timeout))
        return _Resp(200, _ok_body("hi there"))

    monkeypatch.setattr(gateway.httpx, "post", fake_post)
    be = LiveBackend(base_url="http://llm.test/v1", model="m1", api_key="k")
    ex = ChatExchange(system="sys", turns=[("user", "hello")], temperature=0.7, want_json=True)
    assert be.complete(ex) == "hi there"
    url, payload, headers, timeout = calls[0]
    assert url == "http://llm.test/v1/chat/completions"
    assert payload["model"] == "m1"
    assert payload["messages"][0] == {"role": "system", "content": "sys"}
    assert payload["temperature"] == 0.7
    assert payload["response_format"] == {"type": "json_object"}
    assert headers["Authorization"] == "Bearer k"
    assert timeout == 20.0


def test_live_backend_retries_on_5xx(monkeypatch):
    responses = [_Resp(500), _Resp(503), _Resp(200, _ok_body("ok"))]
    sleeps = []
    monkeypatch.setattr(gateway.httpx, "post", lambda *a, **k: responses.pop(0))
    monkeypatch.setattr(gateway.time, "sleep", sleeps.append)
    be = LiveBackend(base_url="http://x", model="m")
    assert be.complete(ChatExchange(system="", turns=[("user", "q")])) == "ok"
    assert sleeps == [1.0, 4.0]


def test_live_backend_gives_up_after_retries(monkeypatch):
    monkeypatch.setattr(gateway.httpx, "post", lambda *a, **k: _Resp(500))
    monkeypatch.setattr(gateway.time, "sleep", lambda s: None)
    be = LiveBackend(base_url="http://x", model="m")
    with pytest.raises(BackendError) as err:
        be.complete(ChatExchange(system="", turns=[("user", "q")]))
    assert err.value.status == 500


def test_live_backend_4xx_fails_fast(monkeypatch):
    calls = []

    def fake_post(*a, **k):
        calls.append(1)
        return _Resp(401)

    monkeypatch.setattr(gateway.httpx, "post", fake_post)
    be = LiveBackend(base_url="http://x", model="m")
    with pytest.raises(BackendError) as err:
        be.complete(ChatExchange(system="", turns=[("user", "q")]))
    assert err.value.status == 401
    assert len(calls) == 1


def test_live_backend_timeout(monkeypatch):
    import httpx

    def fake_post(*a, **k):
        raise httpx.ConnectTimeout("too slow")

    monkeypatch.setattr(gateway.httpx, "post", fake_post)
    monkeypatch.setattr(gateway.time, "sleep", lambda s: None)
    be = LiveBackend(base_url="http://x", model="m")
    with pytest.raises(BackendTimeout):
        be.complete(ChatExchange(system="", turns=[("user", "q")]))


def test_from_env_requires_base_url(monkeypatch):
    monkeypatch.delenv(gateway.ENV_BASE_URL, raising=False)
    with pytest.raises(BackendError):
        LiveBackend.from_env()
    monkeypatch.setenv(gateway.ENV_BASE_URL, "http://llm.test")
    monkeypatch.setenv(gateway.ENV_MODEL, "m9")
    be = LiveBackend.from_env()
    assert be.base_url == "http://llm.test"
    assert be.model == "m9"


def test_make_backend_modes(config, monkeypatch):
    assert isinstance(make_backend("scripted", config.rules), ScriptedBackend)
    with pytest.raises(ValueError):
        make_backend("scripted", None)
    with pytest.raises(ValueError):
        make_backend("telepathy", config.rules)
    monkeypatch.setenv(gateway.ENV_MODE, "scripted")
    assert isinstance(make_backend(None, config.rules), ScriptedBackend)


# --- JSON extraction ---------------------------------------------------------

json_values = st.recursive(
    st.none()
    | st.booleans()
    | st.integers(min_value=-(2**31), max_value=2**31)
    | st.floats(allow_nan=False, allow_infinity=False)
    | st.text(max_size=40),
    lambda children: st.lists(children, max_size=4)
    | st.dictionaries(st.text(max_size=12), children, max_size=4),
    max_leaves=16,
)


@settings(max_examples=200, deadline=None)
@given(value=json_values)
def test_extract_json_round_trips_valid_json(value):
    assert extract_json(json.dumps(value)) == value


@settings(max_examples=100, deadline=None)
@given(value=json_values)
def test_extract_json_round_trips_fenced_json(value):
    assert extract_json("```json\n" + json.dumps(value) + "\n```") == value


def test_extract_json_prose_wrapped():
    raw = 'Sure! Here is the plan:\n{"Tours": ["painting 000"]}\nHope that helps.'
    assert extract_json(raw) == {"Tours": ["painting 000"]}


def test_extract_json_single_quotes():
    assert extract_json("{'Response': 'hi', 'Tours': ['painting 001']}") == {
        "Response": "hi",
        "Tours": ["painting 001"],
    }


def test_extract_json_trailing_comma():
    assert extract_json('{"a": [1, 2,], "b": {"c": 3,},}') == {"a": [1, 2], "b": {"c": 3}}


def test_extract_json_curly_quotes():
    assert extract_json('{“Response”: “fancy quotes”}') == {"Response": "fancy quotes"}


def test_extract_json_python_literals():
    assert extract_json("{'ok': True, 'missing': None}") == {"ok": True, "missing": None}


def test_extract_json_nested_fences():
    raw = "```\n```json\n{\"a\": 1}\n```\n```"
    assert extract_json(raw) == {"a": 1}


def test_extract_json_braces_inside_strings():
    raw = 'prefix {"text": "use {braces} freely", "n": 1} suffix'
    assert extract_json(raw) == {"text": "use {braces} freely", "n": 1}


def test_extract_json_failure_keeps_raw():
    raw = "I am sorry, I cannot answer that."
    with pytest.raises(RepairFailed) as err:
        extract_json(raw)
    assert err.value.raw == raw


def test_extract_json_on_malformed_corpus():
    corpus = json.loads((ROOT / "fixtures" / "malformed_corpus.json").read_text())
    assert len(corpus) == 20
    repaired = 0
    for item in corpus:
        try:
            value = extract_json(item["response"])
        except RepairFailed:
            assert not item["repairable"], f"{item['name']} should have been repairable"
            continue
        repaired += 1
        assert isinstance(value, (dict, list)), item["name"]
    assert repaired >= 15
