"""Mock sentence-level TTS with a linear latency model.

Synthesis of a sentence takes L = a + b * len(sentence) seconds of real time
on a worker thread; the resulting audio lasts D = c * len(sentence) seconds.
Handles can be enqueued in any number and synthesize concurrently — callers
wait on ``ready`` and then play back sequentially.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

from ..errors import PreconditionError


@dataclass(frozen=True)
class SynthConfig:
    latency_base: float = 0.1      # a, seconds
    latency_per_char: float = 0.005  # b, seconds per character
    duration_per_char: float = 0.05  # c, seconds per character

    def latency(self, sentence: str) -> float:
        return self.latency_base + self.latency_per_char * len(sentence)

    def duration(self, sentence: str) -> float:
        return self.duration_per_char * len(sentence)


class UtteranceHandle:
    """One sentence moving through queued -> ready -> playing -> done."""

    def __init__(self, sentence: str, duration: float):
        self.sentence = sentence
        self.duration = duration
        self.state = "queued"
        self._ready = threading.Event()

    def mark_ready(self):
        self.state = "ready"
        self._ready.set()

    def wait_ready(self, timeout: float | None = None) -> bool:
        ok = self._ready.wait(timeout)
        return ok


class MockSynthesizer:
    def __init__(self, config: SynthConfig | None = None):
        self.config = config or SynthConfig()
        self._threads: list[threading.Thread] = []

    def synth(self, sentence: str) -> UtteranceHandle:
        if not sentence or not sentence.strip():
            raise PreconditionError("cannot synthesize an empty sentence")
        handle = UtteranceHandle(sentence, self.config.duration(sentence))
        latency = self.config.latency(sentence)

        def worker():
            time.sleep(latency)
            handle.mark_ready()

        thread = threading.Thread(target=worker, daemon=True)
        self._threads.append(thread)
        thread.start()
        return handle

    def join(self, timeout: float = 10.0):
        deadline = time.monotonic() + timeout
        for thread in self._threads:
            thread.join(max(0.0, deadline - time.monotonic()))
        self._threads = [t for t in self._threads if t.is_alive()]
