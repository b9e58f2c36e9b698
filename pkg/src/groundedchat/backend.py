"""Completion backends: live chat-completions HTTP endpoint and a
deterministic scripted/replay backend, plus the approximate token counter
used for history budgets and metrics.

Both backends expose the same ``complete(messages, params)`` surface, so the
chat manager never knows which one it is talking to.  Messages use the wire
shape ``{"role": ..., "content": ...}``.
"""

from __future__ import annotations

import json
import os
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol

import httpx

from .errors import (
    ContextOverflowError,
    FixtureExhausted,
    FixtureMismatch,
    PreconditionError,
    RemoteError,
    TransportError,
)

DEFAULT_BASE_URL = "http://localhost:8000"


@dataclass
class CompletionParams:
    model_id: str = "gpt-3.5-turbo"
    temperature: float = 0.2
    max_tokens: int = 512
    timeout: float = 30.0
    retries: int = 2

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise PreconditionError(f"temperature out of range: {self.temperature}")
        if self.max_tokens <= 0:
            raise PreconditionError(f"max_tokens must be positive: {self.max_tokens}")


class ChatBackend(Protocol):
    def complete(self, messages: list[dict], params: CompletionParams) -> str: ...


def _check_messages(messages: list[dict]):
    if not messages:
        raise PreconditionError("messages must be nonempty")
    if messages[0].get("role") != "system":
        raise PreconditionError("first message must have role 'system'")


_OVERFLOW_MARKERS = ("context_length_exceeded", "maximum context length", "token limit")


class HttpChatBackend:
    """Client for a ``POST /v1/chat/completions`` endpoint.

    Retries transport failures idempotently up to ``params.retries`` extra
    attempts; remote 4xx/5xx surface as RemoteError, except token-limit
    errors which become ContextOverflowError so the caller can shrink its
    history window.
    """

    def __init__(self, base_url: str | None = None, api_key: str | None = None,
                 transport: httpx.BaseTransport | None = None):
        self.base_url = (base_url or os.getenv("GROUNDEDCHAT_BACKEND_URL") or DEFAULT_BASE_URL).rstrip("/")
        self.api_key = api_key if api_key is not None else os.getenv("GROUNDEDCHAT_API_KEY", "")
        self._client = httpx.Client(transport=transport) if transport else httpx.Client()

    def complete(self, messages: list[dict], params: CompletionParams) -> str:
        _check_messages(messages)
        payload = {
            "model": params.model_id,
            "messages": messages,
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        last_exc: Exception | None = None
        for attempt in range(params.retries + 1):
            try:
                resp = self._client.post(
                    f"{self.base_url}/v1/chat/completions",
                    json=payload, headers=headers, timeout=params.timeout,
                )
            except (httpx.TransportError, httpx.TimeoutException) as exc:
                last_exc = exc
                if attempt < params.retries:
                    time.sleep(min(0.2 * (attempt + 1), 1.0))
                continue
            if resp.status_code >= 400:
                body = resp.text
                if any(marker in body for marker in _OVERFLOW_MARKERS):
                    raise ContextOverflowError(body[:500])
                raise RemoteError(resp.status_code, body)
            data = resp.json()
            text = data["choices"][0]["message"]["content"]
            return text.rstrip()
        raise TransportError(f"request failed after {params.retries + 1} attempts: {last_exc}")

    def close(self):
        self._client.close()


def normalize_for_match(text: str) -> str:
    """Case-folded, whitespace-collapsed form used by prefix matchers."""
    return re.sub(r"\s+", " ", text.strip()).casefold()


MATCH_KINDS = ("exact", "normalized-prefix")


@dataclass(frozen=True)
class FixtureEntry:
    match_kind: str
    prompt: str
    response: str

    def accepts(self, actual: str) -> bool:
        if self.match_kind == "exact":
            return actual == self.prompt
        return normalize_for_match(actual).startswith(normalize_for_match(self.prompt))


@dataclass
class ScriptFixture:
    """Ordered canned responses, consumed strictly front to back."""

    entries: list[FixtureEntry] = field(default_factory=list)
    cursor: int = 0

    @property
    def remaining(self) -> int:
        return len(self.entries) - self.cursor

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], match_kind: str = "normalized-prefix") -> "ScriptFixture":
        return cls([FixtureEntry(match_kind, p, r) for p, r in pairs])

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "ScriptFixture":
        entries = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            kind = rec.get("match_kind", "normalized-prefix")
            if kind not in MATCH_KINDS:
                raise PreconditionError(f"unknown match_kind: {kind!r}")
            entries.append(FixtureEntry(kind, rec["prompt"], rec["response"]))
        return cls(entries)

    def to_jsonl(self, path: str | Path):
        lines = [
            json.dumps({"match_kind": e.match_kind, "prompt": e.prompt, "response": e.response},
                       ensure_ascii=False)
            for e in self.entries
        ]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def scripted_complete(fixture: ScriptFixture, messages: list[dict]) -> str:
    """Return the head entry's response if its matcher accepts the final
    message; advance the cursor.  Mismatch is a hard, diff-bearing error."""
    _check_messages(messages)
    if fixture.cursor >= len(fixture.entries):
        raise FixtureExhausted(f"fixture exhausted after {fixture.cursor} entries")
    entry = fixture.entries[fixture.cursor]
    actual = messages[-1]["content"]
    if not entry.accepts(actual):
        raise FixtureMismatch(entry.prompt, actual, entry.match_kind)
    fixture.cursor += 1
    return entry.response


class ScriptedBackend:
    """Deterministic ChatBackend over a ScriptFixture (one session each)."""

    def __init__(self, fixture: ScriptFixture):
        self.fixture = fixture

    def complete(self, messages: list[dict], params: CompletionParams) -> str:
        return scripted_complete(self.fixture, messages)


# Approximate tokenizer: one token per word run, one per non-space
# punctuation character.  Documented stand-in for model tokenizers; reports
# built on it are labelled "approx tokens".
_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


def count_tokens(text: str) -> int:
    return len(_TOKEN_RE.findall(text))


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)
