"""Chat-completion gateway: prompt templates, pluggable backends, JSON repair.

Backends share one interface: ``complete(exchange) -> str``. The live backend
speaks a chat-completion HTTP API (system + messages) configured through
environment variables; the scripted backend answers from an ordered
regex -> response rule table so the whole pipeline runs deterministically
offline.
"""

from __future__ import annotations

import ast
import json
import logging
import os
import re
import time
from dataclasses import dataclass

import httpx

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 20.0  # seconds per attempt
DEFAULT_RETRIES = 2
BACKOFF_SCHEDULE = (1.0, 4.0)  # sleep before retry 1, retry 2

ENV_BASE_URL = "WANDER_LLM_BASE_URL"
ENV_MODEL = "WANDER_LLM_MODEL"
ENV_API_KEY = "WANDER_LLM_API_KEY"
ENV_MODE = "WANDER_LLM_MODE"


class GatewayError(Exception):
    """Base for failures surfaced to the caller for fallback handling."""


class BackendError(GatewayError):
    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class BackendTimeout(GatewayError):
    pass


class MissingSlot(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"unresolved prompt placeholder {self.name!r}"


class RepairFailed(ValueError):
    """Model output held no recoverable JSON; ``raw`` keeps the original text."""

    def __init__(self, raw: str):
        super().__init__("could not extract JSON from model output")
        self.raw = raw


# ---------------------------------------------------------------------------
# Prompt templates


@dataclass(frozen=True)
class PromptTemplate:
    """Structured prompt: role preamble, category definitions, task, constraints,
    few-shot examples, and a related-information body with {{slot}} placeholders.

    Constraints may carry a stage guard (``when stage is in progress: ...``);
    guarded lines render only when the ``stage`` slot matches.
    """

    name: str
    perspective: str
    definitions: tuple[str, ...]
    task_spec: str
    constraints: tuple[tuple[str | None, str], ...]  # (stage guard, text)
    few_shots: tuple[tuple[str, str], ...]
    related_body: str

    @property
    def slot_names(self) -> frozenset[str]:
        return frozenset(_SLOT_RE.findall(self._full_body()))

    def _full_body(self) -> str:
        parts = [self.perspective, self.task_spec, self.related_body]
        parts += list(self.definitions)
        parts += [text for _, text in self.constraints]
        return "\n".join(parts)


_SLOT_RE = re.compile(r"\{\{([a-z_]+)\}\}")
_SECTION_RE = re.compile(r"^\[(perspective|definitions|task|constraints|examples|related)\]\s*$")
_GUARD_RE = re.compile(r"^when stage is (beginning|in progress|ending):\s*(.*)$", re.IGNORECASE)


def parse_template(name: str, text: str) -> PromptTemplate:
    """Parse a template file into its sections."""
    sections: dict[str, list[str]] = {}
    current: str | None = None
    for line in text.splitlines():
        m = _SECTION_RE.match(line.strip())
        if m:
            current = m.group(1)
            sections.setdefault(current, [])
            continue
        if current is not None:
            sections[current].append(line)

    def block(key: str) -> str:
        return "\n".join(sections.get(key, [])).strip()

    def items(key: str) -> list[str]:
        lines = [ln.strip() for ln in sections.get(key, [])]
        return [ln.lstrip("- ").strip() for ln in lines if ln.startswith("-")]

    constraints: list[tuple[str | None, str]] = []
    for item in items("constraints"):
        g = _GUARD_RE.match(item)
        if g:
            constraints.append((g.group(1).lower(), g.group(2)))
        else:
            constraints.append((None, item))

    few_shots: list[tuple[str, str]] = []
    pending_in: str | None = None
    for line in sections.get("examples", []):
        stripped = line.strip()
        if stripped.lower().startswith("in:"):
            pending_in = stripped[3:].strip()
        elif stripped.lower().startswith("out:") and pending_in is not None:
            few_shots.append((pending_in, stripped[4:].strip()))
            pending_in = None

    return PromptTemplate(
        name=name,
        perspective=block("perspective"),
        definitions=tuple(items("definitions")),
        task_spec=block("task"),
        constraints=tuple(constraints),
        few_shots=tuple(few_shots),
        related_body=block("related"),
    )


def load_templates(prompt_dir: str) -> dict[str, PromptTemplate]:
    templates = {}
    for bot in ("classifier", "compiler", "explorer", "navigator", "identifier"):
        path = os.path.join(prompt_dir, f"{bot}.txt")
        with open(path, "r", encoding="utf-8") as fh:
            templates[bot] = parse_template(bot, fh.read())
    return templates


def render(template: PromptTemplate, slots: dict[str, str]) -> str:
    """Deterministic prompt text; raises MissingSlot on unresolved placeholders."""
    parts = [template.perspective]
    if template.definitions:
        parts.append("Definitions:\n" + "\n".join(f"- {d}" for d in template.definitions))
    if template.task_spec:
        parts.append(template.task_spec)
    stage = slots.get("stage", "")
    applicable = [text for guard, text in template.constraints if guard is None or guard == stage]
    if applicable:
        parts.append("Constraints:\n" + "\n".join(f"- {c}" for c in applicable))
    if template.few_shots:
        shots = "\n\n".join(f"Input: {i}\nOutput: {o}" for i, o in template.few_shots)
        parts.append("Examples:\n" + shots)
    if template.related_body:
        parts.append(template.related_body)
    text = "\n\n".join(p for p in parts if p)

    def fill(match: re.Match) -> str:
        name = match.group(1)
        if name not in slots:
            raise MissingSlot(name)
        return slots[name]

    return _SLOT_RE.sub(fill, text)


# ---------------------------------------------------------------------------
# Backends


@dataclass
class ChatExchange:
    system: str
    turns: list[tuple[str, str]]
    temperature: float = 0.2
    max_tokens: int = 800
    want_json: bool = False

    def turn_text(self) -> str:
        return "\n\n".join(text for _, text in self.turns)


class ScriptedBackend:
    """Deterministic rule-table stand-in for the live model.

    Rules are ``{"match": regex, "response": text}`` checked in order against
    the exchange's turn text (user/assistant turns only, so few-shot examples
    inside the system prompt can never trigger a rule). Patterns are compiled
    case-insensitive and multiline; embed ``(?s)`` for cross-line matches.
    """

    def __init__(self, rules: list[dict]):
        self.rules = [
            (re.compile(rule["match"], re.IGNORECASE | re.MULTILINE), rule["response"])
            for rule in rules
        ]

    @classmethod
    def from_file(cls, path: str) -> "ScriptedBackend":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(json.load(fh))

    def complete(self, exchange: ChatExchange) -> str:
        target = exchange.turn_text()
        for pattern, response in self.rules:
            if pattern.search(target):
                return response
        raise BackendError(f"no scripted rule matched: {target[:120]!r}")


class LiveBackend:
    """Chat-completion HTTP client with timeout, retries, and backoff."""

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str = "",
        timeout: float = DEFAULT_TIMEOUT,
        retries: int = DEFAULT_RETRIES,
        backoff: tuple[float, ...] = BACKOFF_SCHEDULE,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff

    @classmethod
    def from_env(cls) -> "LiveBackend":
        base_url = os.environ.get(ENV_BASE_URL, "")
        model = os.environ.get(ENV_MODEL, "gpt-3.5-turbo")
        if not base_url:
            raise BackendError(f"{ENV_BASE_URL} is not set")
        return cls(base_url=base_url, model=model, api_key=os.environ.get(ENV_API_KEY, ""))

    def complete(self, exchange: ChatExchange) -> str:
        messages = [{"role": "system", "content": exchange.system}]
        messages += [{"role": role, "content": text} for role, text in exchange.turns]
        payload = {
            "model": self.model,
            "messages": messages,
            "temperature": exchange.temperature,
            "max_tokens": exchange.max_tokens,
        }
        if exchange.want_json:
            payload["response_format"] = {"type": "json_object"}
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        last_error: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt > 0:
                time.sleep(self.backoff[min(attempt - 1, len(self.backoff) - 1)])
            try:
                resp = httpx.post(
                    f"{self.base_url}/chat/completions",
                    json=payload,
                    headers=headers,
                    timeout=self.timeout,
                )
                if resp.status_code >= 500:
                    last_error = BackendError(f"server error {resp.status_code}", status=resp.status_code)
                    continue
                if resp.status_code >= 400:
                    raise BackendError(f"request rejected: {resp.status_code}", status=resp.status_code)
                return resp.json()["choices"][0]["message"]["content"]
            except httpx.TimeoutException as exc:
                last_error = BackendTimeout(str(exc))
            except (httpx.HTTPError, KeyError, ValueError) as exc:
                last_error = BackendError(str(exc))
        if isinstance(last_error, GatewayError):
            raise last_error
        raise BackendError(str(last_error))


def make_backend(mode: str | None = None, rules_path: str | None = None):
    """Build a backend from config/env. Mode is ``live`` or ``scripted``."""
    mode = mode or os.environ.get(ENV_MODE, "scripted")
    if mode == "live":
        return LiveBackend.from_env()
    if mode == "scripted":
        if not rules_path:
            raise ValueError("scripted backend requires a rules file")
        return ScriptedBackend.from_file(rules_path)
    raise ValueError(f"unknown backend mode {mode!r}")


def complete(backend, exchange: ChatExchange) -> str:
    if not exchange.turns:
        raise ValueError("exchange must contain at least one turn")
    return backend.complete(exchange)


# ---------------------------------------------------------------------------
# JSON extraction and repair

_FENCE_RE = re.compile(r"^```[a-zA-Z]*\s*\n?|```\s*$")
_QUOTE_MAP = str.maketrans({"“": '"', "”": '"', "‘": "'", "’": "'"})


def _strip_fences(text: str) -> str:
    text = text.strip()
    while text.startswith("```"):
        first_newline = text.find("\n")
        if first_newline == -1:
            return text.lstrip("`").strip()
        text = text[first_newline + 1 :]
        if text.rstrip().endswith("```"):
            text = text.rstrip().rstrip("`").rstrip()
        text = text.strip()
    return text


def _first_balanced_object(text: str) -> str | None:
    """First balanced {...}, ignoring braces inside double-quoted strings."""
    start = text.find("{")
    if start == -1:
        return None
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[start : i + 1]
    return None


def _swap_single_quotes(text: str) -> str:
    """Convert single quotes to double quotes outside double-quoted strings."""
    out = []
    in_string = False
    escaped = False
    for ch in text:
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            out.append(ch)
            continue
        if ch == '"':
            in_string = True
            out.append(ch)
        elif ch == "'":
            out.append('"')
        else:
            out.append(ch)
    return "".join(out)


def _drop_trailing_commas(text: str) -> str:
    out = []
    in_string = False
    escaped = False
    for ch in text:
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            out.append(ch)
            continue
        if ch == '"':
            in_string = True
            out.append(ch)
            continue
        if ch in "]}":
            j = len(out) - 1
            while j >= 0 and out[j] in " \t\r\n":
                j -= 1
            if j >= 0 and out[j] == ",":
                del out[j]
        out.append(ch)
    return "".join(out)


def _try_parse(candidate: str):
    try:
        return json.loads(candidate)
    except (json.JSONDecodeError, ValueError):
        pass
    try:
        value = ast.literal_eval(candidate)
        if isinstance(value, (dict, list)):
            return value
    except (ValueError, SyntaxError, MemoryError, RecursionError):
        pass
    for repaired in (
        _drop_trailing_commas(candidate),
        _drop_trailing_commas(_swap_single_quotes(candidate)),
    ):
        try:
            return json.loads(repaired)
        except (json.JSONDecodeError, ValueError):
            continue
    return None


def extract_json(raw: str):
    """Parse model output into a JSON value, repairing common damage.

    Pipeline: strip code fences; parse as-is; locate the first balanced
    object; then repair (cut trailing prose after the last brace, normalize
    curly quotes, convert single quotes outside strings, drop trailing
    commas) and parse again. Raises RepairFailed with the original text when
    nothing recoverable remains.
    """
    text = _strip_fences(raw)
    try:
        return json.loads(text)
    except (json.JSONDecodeError, ValueError):
        pass

    candidate = _first_balanced_object(text)
    if candidate is not None:
        value = _try_parse(candidate)
        if value is not None:
            return value

    normalized = text.translate(_QUOTE_MAP)
    first = normalized.find("{")
    last = normalized.rfind("}")
    if first != -1 and last > first:
        cut = normalized[first : last + 1]
        for attempt in (_first_balanced_object(cut) or cut, cut):
            value = _try_parse(attempt)
            if value is not None:
                return value
    raise RepairFailed(raw)
