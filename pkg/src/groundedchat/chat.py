"""Session state and the prompt-engineering protocol.

A session owns the ordered message history (system prompt, internal queries,
user turns, answers), the object bookkeeping behind status updates and
object-fact queries, and the history window sent over the wire.  All
mutations are serialized through a per-session lock; perception diffs may
arrive from other threads but are applied one at a time.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from . import prompts
from .actions import ActionRegistry, ResponsePlan, parse_response
from .backend import ChatBackend, CompletionParams, count_tokens
from .errors import BackendError, ContextOverflowError, PreconditionError
from .perception import WorldDiff

logger = logging.getLogger(__name__)


class Role(str, Enum):
    SYSTEM = "system"
    INTERNAL_QUERY = "internal_query"
    USER_QUERY = "user_query"
    ASSISTANT = "assistant"


# Internal and user queries are indistinguishable on the wire.
WIRE_ROLES = {
    Role.SYSTEM: "system",
    Role.INTERNAL_QUERY: "user",
    Role.USER_QUERY: "user",
    Role.ASSISTANT: "assistant",
}


@dataclass
class ChatMessage:
    role: Role
    text: str
    timestamp: float
    tag: str = ""

    def record(self) -> dict:
        return {"role": self.role.value, "text": self.text,
                "timestamp": self.timestamp, "tag": self.tag}


@dataclass
class SessionConfig:
    model_id: str = "gpt-3.5-turbo"
    temperature: float = 0.2
    max_tokens: int = 512
    timeout: float = 30.0
    retries: int = 2
    history_budget: int = 4000
    priming_enabled: bool = True

    def completion_params(self) -> CompletionParams:
        return CompletionParams(model_id=self.model_id, temperature=self.temperature,
                                max_tokens=self.max_tokens, timeout=self.timeout,
                                retries=self.retries)


def _counter_clock() -> Callable[[], float]:
    # Deterministic timestamps so scripted transcripts are byte-reproducible.
    counter = iter(range(10**9))
    return lambda: float(next(counter))


class ChatSession:
    """One conversation: message history plus grounding state."""

    def __init__(self, config: SessionConfig, registry: ActionRegistry,
                 profile: prompts.RobotProfile, backend: ChatBackend,
                 clock: Callable[[], float] | None = None):
        self.config = config
        self.registry = registry
        self.profile = profile
        self.backend = backend
        self.clock = clock or _counter_clock()
        self.messages: list[ChatMessage] = []
        self.known_objects: set[str] = set()
        self.current_objects: list[str] = []
        self.last_reported_objects: list[str] = []
        self.pending_gestures: list[str] = []
        self.pending_notices: list[str] = []
        self._announce_initial = False
        self.lock = threading.RLock()

    # -- low-level plumbing ------------------------------------------------

    def _append(self, role: Role, text: str, tag: str = "") -> ChatMessage:
        msg = ChatMessage(role=role, text=text, timestamp=self.clock(), tag=tag)
        self.messages.append(msg)
        return msg

    def _round(self, query: str, role: Role, tag: str) -> str:
        """Send one query/answer round; on failure the query message is
        removed so history only ever contains completed rounds."""
        self._append(role, query, tag=tag)
        extra_drop = 0
        while True:
            wire = history_window(self.messages, self.config.history_budget,
                                  extra_drop=extra_drop)
            try:
                answer = self.backend.complete(wire, self.config.completion_params())
                break
            except ContextOverflowError:
                if extra_drop + 1 > _droppable_rounds(self.messages):
                    self.messages.pop()
                    raise
                extra_drop += 1
            except BackendError:
                self.messages.pop()
                raise
        self._append(Role.ASSISTANT, answer, tag=tag)
        return answer

    # -- protocol operations -----------------------------------------------

    def user_turn(self, utterance: str) -> ResponsePlan:
        """One conversational turn: flush any pending status update as its
        own internal round, then send the augmented user prompt and parse
        the answer into a plan."""
        if not utterance or not utterance.strip():
            raise PreconditionError("utterance must be nonempty")
        with self.lock:
            self.flush_status_update()
            query = prompts.user_query(self.profile.name, utterance)
            answer = self._round(query, Role.USER_QUERY, tag="user")
            return parse_response(answer, self.registry)

    def status_pending(self) -> bool:
        return (self.current_objects != self.last_reported_objects
                or bool(self.pending_gestures) or bool(self.pending_notices)
                or self._announce_initial)

    def flush_status_update(self) -> str | None:
        """Send the batched status update if anything changed since the last
        report.  On backend failure the pending state survives, so the update
        is retried before the next turn."""
        with self.lock:
            if not self.status_pending():
                return None
            text = compose_status_update(
                self.last_reported_objects, self.current_objects,
                self.pending_gestures, self.pending_notices,
                force=self._announce_initial,
            )
            if text is None:
                return None
            answer = self._round(text, Role.INTERNAL_QUERY, tag="status_update")
            self.last_reported_objects = list(self.current_objects)
            self.pending_gestures = []
            self.pending_notices = []
            self._announce_initial = False
            return answer

    def ingest_world_diff(self, diff: WorldDiff):
        """Fold a perception diff into session state: update the current
        list, queue gestures, and fire the one-time facts query for objects
        never seen in this session."""
        with self.lock:
            removed = set(diff.removed)
            current = [o for o in self.current_objects if o not in removed]
            for name in diff.added:
                if name not in current:
                    current.append(name)
            self.current_objects = current
            self.pending_gestures.extend(diff.gestures)
            new = [o for o in diff.added if o not in self.known_objects]
            if new:
                self.object_facts_query(new)

    def object_facts_query(self, new_objects: list[str]):
        """Single internal query listing all genuinely new objects.  Backend
        failure skips the facts but still marks the objects known."""
        if not new_objects:
            return
        already = [o for o in new_objects if o in self.known_objects]
        if already:
            raise PreconditionError(f"objects already known: {already}")
        with self.lock:
            try:
                self._round(prompts.object_facts_query(new_objects),
                            Role.INTERNAL_QUERY, tag="object_facts")
            except BackendError as exc:
                logger.warning("object facts query failed, skipping: %s", exc)
            finally:
                self.known_objects.update(new_objects)

    def note_action_failure(self, action: str, obj: str):
        """Queue grounding feedback about a failed action for the next
        status update."""
        with self.lock:
            self.pending_notices.append(
                f"You tried to {action} the {obj}, but it is not on the table."
            )

    def note_gesture(self, gesture: str):
        with self.lock:
            self.pending_gestures.append(gesture)

    # -- export --------------------------------------------------------------

    def export_transcript(self) -> list[dict]:
        return [m.record() for m in self.messages]


def start_session(config: SessionConfig, registry: ActionRegistry,
                  profile: prompts.RobotProfile, backend: ChatBackend,
                  initial_objects: list[str] | None = None,
                  clock: Callable[[], float] | None = None) -> ChatSession:
    """Create a session: system prompt, optional priming round, and initial
    perception state.

    ``initial_objects`` None means perception is inactive.  An active, empty
    table is announced immediately (its own status round); a non-empty table
    goes through the normal diff path (facts query now, status update before
    the first user turn).
    """
    session = ChatSession(config, registry, profile, backend, clock=clock)
    session._append(Role.SYSTEM, prompts.render_system_prompt(profile, registry),
                    tag="system")
    if config.priming_enabled:
        session._round(prompts.priming_query(), Role.INTERNAL_QUERY, tag="priming")
    if initial_objects is not None:
        if initial_objects:
            session.ingest_world_diff(WorldDiff(added=list(initial_objects), removed=[]))
        else:
            session._announce_initial = True
            session.flush_status_update()
    return session


def compose_status_update(prev: list[str], curr: list[str], gestures: list[str],
                          notices: list[str] | tuple = (), force: bool = False) -> str | None:
    """Render the batched status-update query, or None if nothing changed.

    Exactly one of the four object templates is selected from
    (prev empty?, curr empty?, changed?); gesture sentences and failure
    notices follow, then the one-word acknowledge instruction.  A gesture-only
    update restates the current list with the stative variant.
    """
    changed = list(prev) != list(curr)
    if not changed and not gestures and not notices and not force:
        return None
    if not curr:
        variant = prompts.status_line("initial_empty" if not prev else "all_removed")
    elif not prev:
        variant = prompts.status_line("initial_list", curr)
    elif changed:
        variant = prompts.status_line("changed_list", curr)
    else:
        variant = prompts.status_line("initial_list", curr)
    lines = [variant]
    lines.extend(prompts.gesture_line(g) for g in gestures)
    lines.extend(notices)
    lines.append(prompts.acknowledge_line())
    return "\n".join(lines)


def _rounds(messages: list[ChatMessage]) -> list[list[ChatMessage]]:
    """Group non-system history into query(+answer) rounds."""
    rounds: list[list[ChatMessage]] = []
    for msg in messages[1:]:
        if msg.role is Role.ASSISTANT and rounds and len(rounds[-1]) == 1:
            rounds[-1].append(msg)
        else:
            rounds.append([msg])
    return rounds


def _droppable_rounds(messages: list[ChatMessage]) -> int:
    return max(0, len(_rounds(messages)) - 1)


def history_window(messages: list[ChatMessage], token_budget: int,
                   extra_drop: int = 0) -> list[dict]:
    """Budgeted wire view of the history: SYSTEM always first, the newest
    round always last, oldest rounds dropped pairwise until within budget."""
    if not messages or messages[0].role is not Role.SYSTEM:
        raise PreconditionError("history must start with a system message")
    system = messages[0]
    rounds = _rounds(messages)
    minimum = count_tokens(system.text) + (count_tokens(rounds[-1][0].text) if rounds else 0)
    if token_budget < minimum:
        raise PreconditionError(
            f"token budget {token_budget} below minimum message set ({minimum})"
        )

    def total(rs: list[list[ChatMessage]]) -> int:
        return count_tokens(system.text) + sum(count_tokens(m.text) for r in rs for m in r)

    kept = rounds[:]
    for _ in range(extra_drop):
        if len(kept) > 1:
            kept.pop(0)
    while total(kept) > token_budget and len(kept) > 1:
        kept.pop(0)
    wire = [{"role": WIRE_ROLES[system.role], "content": system.text}]
    for r in kept:
        for m in r:
            wire.append({"role": WIRE_ROLES[m.role], "content": m.text})
    return wire
