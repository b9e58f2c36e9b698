"""Sequential plan execution with pipelined speech.

Every sentence of every SAY segment is handed to the synthesizer up front so
pre-caching runs concurrently; playback then walks the plan in order.  A
sentence plays only after the previous sentence finished and every action
between them has started.  ``express`` is non-blocking; ``look``, ``point``
and ``give`` block the sequencer until motion start and complete in the
background, emitting ACTION_END from a timer.  Failed actions become
ACTION_ERROR events and execution continues.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from ..actions import ActionCall, ResponsePlan, SegmentKind, split_sentences
from ..errors import ActionError
from .speech import MockSynthesizer
from .world import TabletopWorld


class EventKind(str, Enum):
    UTTERANCE_START = "utterance_start"
    UTTERANCE_END = "utterance_end"
    ACTION_START = "action_start"
    ACTION_END = "action_end"
    ACTION_ERROR = "action_error"
    ANOMALY_FILTERED = "anomaly_filtered"


@dataclass(frozen=True)
class ExecutionEvent:
    kind: EventKind
    payload: dict
    timestamp: float


@dataclass(frozen=True)
class ExecutorConfig:
    look_duration: float = 0.5
    point_duration: float = 1.5
    give_duration: float = 3.0
    motion_start: float = 0.2   # blocking latency before motion visibly begins

    def duration_of(self, action: str) -> float:
        return {"look": self.look_duration, "point": self.point_duration,
                "give": self.give_duration}.get(action, 0.0)


class PlanExecutor:
    def __init__(self, world: TabletopWorld, synthesizer: MockSynthesizer,
                 config: ExecutorConfig | None = None,
                 sink: Callable[[ExecutionEvent], None] | None = None,
                 failure_hook: Callable[[ActionCall], None] | None = None,
                 clock: Callable[[], float] = time.monotonic):
        self.world = world
        self.synthesizer = synthesizer
        self.config = config or ExecutorConfig()
        self.sink = sink
        self.failure_hook = failure_hook
        self.clock = clock
        self._emit_lock = threading.Lock()

    def execute(self, plan: ResponsePlan) -> list[ExecutionEvent]:
        timeline: list[ExecutionEvent] = []

        def emit(kind: EventKind, payload: dict):
            with self._emit_lock:
                event = ExecutionEvent(kind=kind, payload=payload,
                                       timestamp=self.clock())
                timeline.append(event)
                if self.sink is not None:
                    self.sink(event)

        for anomaly in plan.anomalies:
            emit(EventKind.ANOMALY_FILTERED,
                 {"raw": anomaly.raw, "reasons": [r.value for r in anomaly.reasons]})

        # Pre-cache: enqueue every sentence of the whole plan immediately.
        handles: dict[int, list] = {}
        for i, segment in enumerate(plan.segments):
            if segment.kind is SegmentKind.SAY:
                handles[i] = [self.synthesizer.synth(s)
                              for s in split_sentences(segment.text)]

        timers: list[threading.Timer] = []
        for i, segment in enumerate(plan.segments):
            if segment.kind is SegmentKind.THOUGHT:
                continue
            if segment.kind is SegmentKind.SAY:
                for handle in handles[i]:
                    handle.wait_ready()
                    handle.state = "playing"
                    emit(EventKind.UTTERANCE_START, {"sentence": handle.sentence})
                    time.sleep(handle.duration)
                    handle.state = "done"
                    emit(EventKind.UTTERANCE_END, {"sentence": handle.sentence})
                continue
            call = segment.call
            try:
                self.world.apply_action(call)
            except ActionError as exc:
                emit(EventKind.ACTION_ERROR,
                     {"action": call.action, "argument": call.argument,
                      "code": exc.code, "message": str(exc)})
                if self.failure_hook is not None:
                    self.failure_hook(call)
                continue
            emit(EventKind.ACTION_START,
                 {"action": call.action, "argument": call.argument})
            if call.action == "express":
                emit(EventKind.ACTION_END,
                     {"action": call.action, "argument": call.argument})
                continue
            duration = self.config.duration_of(call.action)
            time.sleep(min(self.config.motion_start, duration))

            def finish(c: ActionCall = call):
                if c.action in ("point", "give"):
                    self.world.reset_arm()
                emit(EventKind.ACTION_END, {"action": c.action, "argument": c.argument})

            remaining = max(0.0, duration - self.config.motion_start)
            timer = threading.Timer(remaining, finish)
            timer.daemon = True
            timer.start()
            timers.append(timer)

        for timer in timers:
            timer.join()
        return timeline
