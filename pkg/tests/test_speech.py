"""Mock speech synthesizer: latency/duration model and handle lifecycle."""

from __future__ import annotations

import time

import pytest

from groundedchat.embodiment.speech import MockSynthesizer, SynthConfig
from groundedchat.errors import PreconditionError


def test_latency_and_duration_are_linear_in_length():
    config = SynthConfig(latency_base=0.1, latency_per_char=0.005,
                         duration_per_char=0.05)
    sentence = "Hello there."  # 12 chars
    assert config.latency(sentence) == pytest.approx(0.1 + 12 * 0.005)
    assert config.duration(sentence) == pytest.approx(12 * 0.05)


def test_synth_rejects_empty_sentence():
    synth = MockSynthesizer(SynthConfig(0.0, 0.0, 0.0))
    with pytest.raises(PreconditionError):
        synth.synth("")
    with pytest.raises(PreconditionError):
        synth.synth("   ")


def test_handle_becomes_ready_after_latency():
    synth = MockSynthesizer(SynthConfig(latency_base=0.02, latency_per_char=0.0,
                                        duration_per_char=0.001))
    handle = synth.synth("Hello.")
    assert handle.wait_ready(timeout=2.0)
    assert handle.duration == pytest.approx(0.006)
    synth.join()


def test_many_handles_synthesize_concurrently():
    latency = 0.05
    synth = MockSynthesizer(SynthConfig(latency_base=latency, latency_per_char=0.0,
                                        duration_per_char=0.0))
    t0 = time.monotonic()
    handles = [synth.synth(f"Sentence {i}.") for i in range(8)]
    for handle in handles:
        assert handle.wait_ready(timeout=2.0)
    elapsed = time.monotonic() - t0
    # All eight run in parallel threads: total well under 8 * latency.
    assert elapsed < 4 * latency
    synth.join()
