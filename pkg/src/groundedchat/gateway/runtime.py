"""Per-session wiring of chat, world, and executor behind one event stream.

Each session owns a bounded event buffer with monotonically increasing
sequence numbers; every state change (turn lifecycle, status updates,
execution events, robot state, world diffs, gestures) is appended in causal
order.  Turns are strictly serialized: a second utterance while one is in
flight is rejected, never queued.
"""

from __future__ import annotations

import threading
import time
import uuid
from collections import deque
from dataclasses import dataclass

from ..actions import ActionRegistry, ResponsePlan, default_registry
from ..backend import (
    ChatBackend,
    FixtureEntry,
    HttpChatBackend,
    MATCH_KINDS,
    ScriptFixture,
    ScriptedBackend,
)
from ..chat import ChatSession, SessionConfig, start_session
from ..embodiment import MockSynthesizer, PlanExecutor, TabletopWorld
from ..errors import ConfigurationError, GroundedChatError, PreconditionError
from ..prompts import RobotProfile, nicol_profile
from .config import AppConfig

KNOWN_GESTURES = ("wave", "grasp", "pause", "stop")


class TurnInProgress(GroundedChatError):
    """A turn is already being processed for this session."""


class EventBuffer:
    """Ring buffer of {seq, kind, payload, ts} events with change signaling."""

    def __init__(self, capacity: int = 1000):
        self._events: deque[dict] = deque(maxlen=capacity)
        self._seq = 0
        self._cond = threading.Condition()

    def append(self, kind: str, payload: dict) -> dict:
        with self._cond:
            self._seq += 1
            event = {"seq": self._seq, "kind": kind, "payload": payload,
                     "ts": time.time()}
            self._events.append(event)
            self._cond.notify_all()
            return event

    @property
    def last_seq(self) -> int:
        with self._cond:
            return self._seq

    def since(self, after_seq: int) -> list[dict]:
        with self._cond:
            return [e for e in self._events if e["seq"] > after_seq]

    def wait_since(self, after_seq: int, timeout: float) -> list[dict]:
        with self._cond:
            events = [e for e in self._events if e["seq"] > after_seq]
            if events:
                return events
            self._cond.wait(timeout)
            return [e for e in self._events if e["seq"] > after_seq]


def plan_to_dict(plan: ResponsePlan) -> dict:
    segments = []
    for seg in plan.segments:
        if seg.call is not None:
            segments.append({"kind": seg.kind.value, "action": seg.call.action,
                             "argument": seg.call.argument, "raw": seg.call.raw_text})
        else:
            segments.append({"kind": seg.kind.value, "text": seg.text})
    return {
        "segments": segments,
        "anomalies": [{"raw": a.raw, "reasons": [r.value for r in a.reasons]}
                      for a in plan.anomalies],
        "spoken": plan.spoken_text(),
    }


class SessionRuntime:
    def __init__(self, session: ChatSession, world: TabletopWorld,
                 executor: PlanExecutor | None, buffer: EventBuffer,
                 backend_kind: str):
        self.id = uuid.uuid4().hex[:12]
        self.created_at = time.time()
        self.backend_kind = backend_kind
        self.session = session
        self.world = world
        self.executor = executor
        self.events = buffer
        self._turn_lock = threading.Lock()
        self.turn_in_progress = False

    # -- event plumbing -----------------------------------------------------

    def emit(self, kind: str, payload: dict) -> dict:
        return self.events.append(kind, payload)

    def _emit_robot_state(self):
        snap = self.world.snapshot()
        self.emit("robot_state", {"expression": snap.robot_expression,
                                  "gaze_target": snap.robot_gaze,
                                  "arm": snap.robot_arm})

    def execution_sink(self, event):
        self.emit(event.kind.value, event.payload)
        if event.kind.value.startswith("action"):
            self._emit_robot_state()

    # -- operations ----------------------------------------------------------

    def utterance(self, text: str) -> dict:
        if not text or not text.strip():
            raise PreconditionError("utterance must be nonempty")
        if not self._turn_lock.acquire(blocking=False):
            raise TurnInProgress(f"session {self.id} already has a turn in flight")
        self.turn_in_progress = True
        try:
            first_seq = self.events.last_seq + 1
            self.emit("turn_start", {"utterance": text})
            if self.session.status_pending():
                answer = self.session.flush_status_update()
                if answer is not None:
                    query = self.session.messages[-2].text
                    self.emit("status_update", {"query": query, "answer": answer})
            plan = self.session.user_turn(text)
            self.emit("plan", plan_to_dict(plan))
            timeline = self.executor.execute(plan)
            self.emit("turn_end", {"utterance": text})
            return {
                "plan": plan_to_dict(plan),
                "events": {"first_seq": first_seq,
                           "last_seq": self.events.last_seq},
                "timeline_len": len(timeline),
            }
        finally:
            self.turn_in_progress = False
            self._turn_lock.release()

    def mutate_world(self, op: str, name: str,
                     position: tuple[float, float] | None = None) -> dict:
        diff = self.world.mutate_table(op, name, position)
        if diff:
            self.emit("world_diff", {"added": list(diff.added),
                                     "removed": list(diff.removed)})
            self.session.ingest_world_diff(diff)
        return {"objects": self.world.names(),
                "diff": {"added": list(diff.added), "removed": list(diff.removed)}}

    def inject_gesture(self, gesture: str) -> dict:
        if gesture not in KNOWN_GESTURES:
            raise PreconditionError(
                f"unknown gesture {gesture!r}; expected one of {KNOWN_GESTURES}")
        self.session.note_gesture(gesture)
        self.emit("gesture", {"gesture": gesture})
        return {"pending_gestures": list(self.session.pending_gestures)}

    def state(self) -> dict:
        snap = self.world.snapshot()
        return {
            "session_id": self.id,
            "backend": self.backend_kind,
            "turn_in_progress": self.turn_in_progress,
            "objects": [{"name": o.name, "position": list(o.position)}
                        for o in snap.objects],
            "robot": {"expression": snap.robot_expression,
                      "gaze_target": snap.robot_gaze,
                      "arm": snap.robot_arm},
            "reported_objects": list(self.session.last_reported_objects),
            "pending_gestures": list(self.session.pending_gestures),
            "last_seq": self.events.last_seq,
        }

    def transcript(self) -> list[dict]:
        return self.session.export_transcript()


def _build_backend(body: dict, config: AppConfig) -> tuple[ChatBackend, str]:
    spec = body.get("backend", {"kind": "live"})
    kind = spec.get("kind", "live")
    if kind == "scripted":
        if "fixture_path" in spec:
            fixture = ScriptFixture.from_jsonl(spec["fixture_path"])
        elif "fixture" in spec:
            entries = []
            for rec in spec["fixture"]:
                match_kind = rec.get("match_kind", "normalized-prefix")
                if match_kind not in MATCH_KINDS:
                    raise ConfigurationError(f"unknown match_kind {match_kind!r}")
                entries.append(FixtureEntry(match_kind, rec.get("prompt", ""),
                                            rec["response"]))
            fixture = ScriptFixture(entries)
        else:
            raise ConfigurationError("scripted backend needs fixture or fixture_path")
        return ScriptedBackend(fixture), "scripted"
    if kind == "live":
        return HttpChatBackend(base_url=spec.get("base_url", config.backend_url),
                               api_key=spec.get("api_key", config.api_key)), "live"
    raise ConfigurationError(f"unknown backend kind {kind!r}")


def create_runtime(body: dict, config: AppConfig,
                   registry: ActionRegistry | None = None,
                   profile: RobotProfile | None = None) -> SessionRuntime:
    """Build a fully wired session from a create-session request body."""
    registry = registry or default_registry()
    profile = profile or nicol_profile()
    backend, backend_kind = _build_backend(body, config)
    session_config = SessionConfig(
        model_id=body.get("model_id", config.model_id),
        temperature=body.get("temperature", config.temperature),
        max_tokens=body.get("max_tokens", config.max_tokens),
        history_budget=body.get("history_budget", config.history_budget),
        priming_enabled=body.get("priming", True),
    )
    world = TabletopWorld(config.world_config())
    initial_objects = None
    if "objects" in body:
        initial_objects = []
        for obj in body["objects"]:
            world.mutate_table("add", obj["name"], tuple(obj["position"]))
            initial_objects.append(obj["name"])
    clock = time.time if backend_kind == "live" else None
    session = start_session(session_config, registry, profile, backend,
                            initial_objects=initial_objects, clock=clock)
    buffer = EventBuffer(config.event_buffer_size)
    synthesizer = MockSynthesizer(config.synth_config())
    runtime = SessionRuntime(session, world, None, buffer, backend_kind)
    runtime.executor = PlanExecutor(
        world, synthesizer, config.executor_config(),
        sink=runtime.execution_sink,
        failure_hook=lambda call: session.note_action_failure(call.action,
                                                              call.argument),
    )
    return runtime
