"""Action-function vocabulary and the inline action-tag response protocol.

A robot capability is declared as an :class:`ActionSpec` and invoked by the
language model inline in its answer text with an angle-bracket tag such as
``<point(banana)>``.  This module parses raw answers into ordered plans of
SAY / ACTION / THOUGHT segments, detects near-miss tags as anomalies instead
of executing them, and provides the sentence splitter used by the speech
pipeline.

Parsing is total: any text, including adversarial bracket soup, produces a
plan without raising.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import ConfigurationError

EMOTIONS = ("neutral", "happiness", "sadness", "anger", "surprise")


@dataclass(frozen=True)
class ActionSpec:
    """A declared robot capability, rendered into the system prompt.

    ``arg_domain`` is None for open-string arguments (object names) or a
    tuple of the allowed values.  ``description`` is the literal prompt text
    after the ``name(arg_name):`` prefix; when the domain is an enum the
    description must state the same values.
    """

    name: str
    arg_name: str
    description: str
    arg_domain: tuple[str, ...] | None = None
    special_targets: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name or self.name != self.name.lower():
            raise ConfigurationError(f"action name must be nonempty lowercase: {self.name!r}")
        if self.arg_domain is not None and not self.arg_domain:
            raise ConfigurationError(f"enum domain for {self.name!r} must be nonempty")

    def prompt_line(self) -> str:
        return f"{self.name}({self.arg_name}): {self.description}"


class ActionRegistry:
    """Ordered, unique-by-name collection of action specs."""

    def __init__(self, specs: list[ActionSpec] | tuple[ActionSpec, ...]):
        names = [s.name for s in specs]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"duplicate action names: {names}")
        self._specs = tuple(specs)
        self._by_name = {s.name: s for s in self._specs}

    def __iter__(self):
        return iter(self._specs)

    def __len__(self) -> int:
        return len(self._specs)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def get(self, name: str) -> ActionSpec | None:
        return self._by_name.get(name)


def default_registry() -> ActionRegistry:
    """The stock express/look/point/give vocabulary."""
    return ActionRegistry([
        ActionSpec(
            name="express",
            arg_name="emotion",
            description=(
                "Given a string emotion name, change your facial expression to match "
                "that emotion. The list of available emotions is "
                f"[{', '.join(EMOTIONS)}]."
            ),
            arg_domain=EMOTIONS,
        ),
        ActionSpec(
            name="look",
            arg_name="object",
            description=(
                "Given a string of an object name, move your head to look at that "
                'object. In any situation, the object name can also be "user" or '
                "\"hand\" in order to look at the user or user's hand, or it can be "
                '"table" in order to look at the table.'
            ),
            special_targets=("user", "hand", "table"),
        ),
        ActionSpec(
            name="point",
            arg_name="object",
            description=(
                "Given a string of an object name, use your arms to point to that "
                "object on the table. In any situation, the object name can also be "
                '"user" in order to point at the user.'
            ),
            special_targets=("user",),
        ),
        ActionSpec(
            name="give",
            arg_name="object",
            description=(
                "Given a string of an object name, use your arms to grasp that object "
                "on the table and give it to the user. You can hand objects to the "
                "user with this function."
            ),
        ),
    ])


@dataclass(frozen=True)
class ActionCall:
    """A validated invocation of a registry action with one string argument."""

    action: str
    argument: str
    raw_text: str

    def tag(self) -> str:
        return f"<{self.action}({self.argument})>"


class AnomalyReason(str, Enum):
    MALFORMED = "MALFORMED"
    UNKNOWN_ACTION = "UNKNOWN_ACTION"
    BAD_ARGUMENT = "BAD_ARGUMENT"


@dataclass(frozen=True)
class Anomaly:
    """A near-miss action tag: detected, reported, never executed or spoken."""

    raw: str
    reasons: tuple[AnomalyReason, ...]


class SegmentKind(str, Enum):
    SAY = "SAY"
    ACTION = "ACTION"
    THOUGHT = "THOUGHT"


@dataclass(frozen=True)
class ResponseSegment:
    kind: SegmentKind
    text: str = ""
    call: ActionCall | None = None

    @staticmethod
    def say(text: str) -> "ResponseSegment":
        return ResponseSegment(SegmentKind.SAY, text=text)

    @staticmethod
    def thought(text: str) -> "ResponseSegment":
        return ResponseSegment(SegmentKind.THOUGHT, text=text)

    @staticmethod
    def action(call: ActionCall) -> "ResponseSegment":
        return ResponseSegment(SegmentKind.ACTION, call=call)


@dataclass
class ResponsePlan:
    """Ordered SAY/ACTION/THOUGHT sequence parsed from one LLM answer."""

    segments: list[ResponseSegment] = field(default_factory=list)
    anomalies: list[Anomaly] = field(default_factory=list)

    def actions(self) -> list[ActionCall]:
        return [s.call for s in self.segments if s.kind is SegmentKind.ACTION]

    def spoken_text(self) -> str:
        return " ".join(s.text for s in self.segments if s.kind is SegmentKind.SAY)


# Tag scanner.  Alternatives in priority order: a well-formed
# ``<name(arg)>`` call (whitespace tolerated around every token, argument is
# any run free of ')' and newline), the swapped-bracket near miss
# ``name<arg>`` (identifier tight against '<'), and a bare ``<name>``.
_TAG_RE = re.compile(
    r"<\s*(?P<name>[A-Za-z_]\w*)\s*\(\s*(?P<arg>[^)\n]*?)\s*\)\s*>"
    r"|(?P<sw_name>[A-Za-z_]\w*)<\s*(?P<sw_arg>[^<>()\n]+?)\s*>"
    r"|<\s*(?P<bare>[A-Za-z_]\w*)\s*>"
)

_IDENT_RE = re.compile(r"[A-Za-z_]\w*$")


def normalize_action_tag(raw: str, registry: ActionRegistry) -> ActionCall | Anomaly:
    """Resolve one scanned tag span into a call or an anomaly.

    Total function: every recognizable span yields either a valid
    :class:`ActionCall` or an :class:`Anomaly` with reason codes.  Near
    misses are detection-only; they are never auto-corrected into calls.
    """
    m = _TAG_RE.fullmatch(raw.strip())
    if m is None:
        return Anomaly(raw, (AnomalyReason.MALFORMED,))

    if m.group("name") is not None:
        name, arg = m.group("name"), m.group("arg")
        reasons = _argument_reasons(name, arg, registry)
        if not reasons:
            spec = registry.get(name)
            if spec is not None and spec.arg_domain is not None:
                arg = arg.lower()
            return ActionCall(action=name, argument=arg, raw_text=raw)
        return Anomaly(raw, tuple(reasons))

    if m.group("sw_name") is not None:
        name, arg = m.group("sw_name"), m.group("sw_arg")
        reasons = [AnomalyReason.MALFORMED] + _argument_reasons(name, arg, registry)
        return Anomaly(raw, tuple(reasons))

    # bare <name>: missing argument entirely
    return Anomaly(raw, (AnomalyReason.MALFORMED,))


def _argument_reasons(name: str, arg: str, registry: ActionRegistry) -> list[AnomalyReason]:
    spec = registry.get(name)
    if spec is None:
        return [AnomalyReason.UNKNOWN_ACTION]
    if spec.arg_domain is not None:
        if arg.lower() not in spec.arg_domain:
            return [AnomalyReason.BAD_ARGUMENT]
    elif not arg.strip():
        return [AnomalyReason.BAD_ARGUMENT]
    return []


def parse_response(text: str, registry: ActionRegistry) -> ResponsePlan:
    """Split a raw LLM answer into an executable plan.

    Tag spans are scanned first (so a tag inside parentheses still becomes an
    ACTION), then the remaining text is thought-extracted into SAY/THOUGHT
    segments in source order.  Never raises on any input.
    """
    plan = ResponsePlan()
    pos = 0
    pending_text: list[str] = []

    def flush_text():
        chunk = "".join(pending_text)
        pending_text.clear()
        if chunk.strip():
            _append_prose(plan, chunk)

    for m in _TAG_RE.finditer(text):
        raw = m.group(0)
        if m.group("bare") is not None and m.group("bare") not in registry:
            # unknown bare <word>: plain prose, not an attempted action
            continue
        pending_text.append(text[pos:m.start()])
        pos = m.end()
        resolved = normalize_action_tag(raw, registry)
        if isinstance(resolved, ActionCall):
            flush_text()
            plan.segments.append(ResponseSegment.action(resolved))
        else:
            flush_text()
            plan.anomalies.append(resolved)
    pending_text.append(text[pos:])
    flush_text()
    return plan


def _append_prose(plan: ResponsePlan, chunk: str):
    for seg in extract_thoughts(chunk):
        if (
            seg.kind is SegmentKind.SAY
            and plan.segments
            and plan.segments[-1].kind is SegmentKind.SAY
        ):
            merged = _join_say(plan.segments[-1].text, seg.text)
            plan.segments[-1] = ResponseSegment.say(merged)
        else:
            plan.segments.append(seg)


_PUNCT_LEAD = (".", ",", "!", "?", ";", ":")


def _join_say(prev: str, nxt: str) -> str:
    if nxt.startswith(_PUNCT_LEAD):
        return prev + nxt
    return f"{prev} {nxt}"


_ASTERISK_RE = re.compile(r"\*([^*\n]+)\*")


def extract_thoughts(text: str) -> list[ResponseSegment]:
    """Split tag-free prose into SAY and THOUGHT segments.

    Asterisk-delimited spans are always thoughts.  Top-level parenthesized
    spans become thoughts only when longer than two words; short
    parentheticals like "(approximately)" stay spoken.  Unbalanced
    delimiters fail open: the span is kept as SAY.
    """
    spans = []  # (start, end, inner_text) of thought spans
    for m in _ASTERISK_RE.finditer(text):
        inner = m.group(1).strip()
        if inner:
            spans.append((m.start(), m.end(), inner))
    spans.extend(_paren_thought_spans(text))
    spans.sort()

    segments: list[ResponseSegment] = []
    pos = 0
    for start, end, inner in spans:
        if start < pos:
            continue  # overlapping span already consumed
        _append_say_piece(segments, text[pos:start])
        segments.append(ResponseSegment.thought(inner))
        pos = end
    _append_say_piece(segments, text[pos:])
    return segments


def _paren_thought_spans(text: str) -> list[tuple[int, int, str]]:
    spans = []
    depth = 0
    start = -1
    for i, ch in enumerate(text):
        if ch == "(":
            if depth == 0:
                start = i
            depth += 1
        elif ch == ")":
            if depth == 0:
                continue  # stray close: fail open
            depth -= 1
            if depth == 0:
                inner = text[start + 1:i].strip()
                if inner and len(inner.split()) > 2:
                    spans.append((start, i + 1, inner))
    # an unclosed '(' simply produces no span: the text stays SAY
    return spans


def _append_say_piece(segments: list[ResponseSegment], piece: str):
    stripped = piece.strip()
    if not stripped:
        return
    last_say = None
    if segments and any(s.kind is SegmentKind.SAY for s in segments):
        for idx in range(len(segments) - 1, -1, -1):
            if segments[idx].kind is SegmentKind.SAY:
                last_say = idx
                break
    if stripped.startswith(_PUNCT_LEAD) and last_say is not None:
        segments[last_say] = ResponseSegment.say(_join_say(segments[last_say].text, stripped))
    else:
        segments.append(ResponseSegment.say(stripped))


def render_plan(plan: ResponsePlan) -> str:
    """Render a plan back to answer text (inverse of parse_response for
    markup-free segment texts); used by the round-trip fuzz tests."""
    parts = []
    for seg in plan.segments:
        if seg.kind is SegmentKind.SAY:
            parts.append(seg.text)
        elif seg.kind is SegmentKind.THOUGHT:
            parts.append(f"*{seg.text}*")
        else:
            parts.append(seg.call.tag())
    return " ".join(parts)


# Sentence splitting.  Deterministic rule: a run of terminal punctuation
# followed by whitespace or end of text closes a sentence, unless the word it
# terminates is a protected abbreviation.  Decimal numbers are safe because
# their dot is never followed by whitespace.
ABBREVIATIONS = ("mr.", "dr.", "e.g.", "i.e.", "etc.", "vs.", "no.")

_SENTENCE_END_RE = re.compile(r"[.!?]+(?=\s|$)")


def split_sentences(text: str) -> list[str]:
    """Split normalized text into sentences; joining them back with single
    spaces reproduces the whitespace-normalized input."""
    normalized = " ".join(text.split())
    if not normalized:
        return []
    sentences = []
    start = 0
    for m in _SENTENCE_END_RE.finditer(normalized):
        end = m.end()
        word = normalized[:end].rsplit(None, 1)[-1].lower()
        if m.group() == "." and word in ABBREVIATIONS:
            continue
        sentence = normalized[start:end].strip()
        if sentence:
            sentences.append(sentence)
        start = end
    tail = normalized[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences
