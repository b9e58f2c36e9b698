"""Motion segmentation and gesture classification on synthetic pose streams."""

from __future__ import annotations

import random

import pytest

from groundedchat.perception.gestures import (
    GestureDetector,
    GestureParams,
    PhaseKind,
    classify_gesture,
    segment_motion,
)
from groundedchat.perception.one_euro import KEYPOINT_NAMES, KP, PoseFilter, PoseFrame
from groundedchat.perception.synth import GESTURE_KINDS, synth_gesture


def smoothed(frames: list[PoseFrame]) -> list[PoseFrame]:
    filt = PoseFilter()
    out = []
    for frame in frames:
        result = filt.filter_keypoints(frame)
        if result is not None:
            out.append(result)
    return out


def classify_stream(frames: list[PoseFrame]) -> str:
    return classify_gesture(segment_motion(smoothed(frames)))


# --- segmentation ------------------------------------------------------------------


def make_wrist_stream(speeds_by_span: list[tuple[float, float]],
                      fps: float = 30.0) -> list[PoseFrame]:
    """Pose stream whose right wrist moves horizontally at the given speed
    for the given duration, one span after another."""
    base = {name: (0.5, 0.5) for name in KEYPOINT_NAMES}
    frames = []
    t = 0.0
    x = 0.4
    dt = 1.0 / fps
    for speed, duration in speeds_by_span:
        steps = int(round(duration * fps))
        for _ in range(steps):
            keypoints = []
            for name in KEYPOINT_NAMES:
                if name == "r_wrist":
                    keypoints.append((x, 0.5, 1.0))
                else:
                    keypoints.append((*base[name], 1.0))
            frames.append(PoseFrame(timestamp=t, keypoints=tuple(keypoints)))
            t += dt
            x += speed * dt
    return frames


def test_phases_tile_the_window_exactly():
    frames = make_wrist_stream([(0.0, 0.5), (1.0, 0.5), (0.0, 0.5)])
    phases = segment_motion(frames)
    assert phases[0].start == frames[0].timestamp
    assert phases[-1].end == frames[-1].timestamp
    for a, b in zip(phases, phases[1:]):
        assert a.end == b.start


def test_rest_flight_rest_segmentation():
    frames = make_wrist_stream([(0.0, 0.6), (1.0, 0.6), (0.0, 0.6)])
    phases = segment_motion(frames)
    kinds = [p.kind for p in phases]
    assert kinds == [PhaseKind.REST, PhaseKind.FLIGHT, PhaseKind.REST]


def test_hysteresis_keeps_mid_band_speed_in_current_phase():
    # 0.25/s sits between speed_lo (0.15) and speed_hi (0.35): no transition
    # from either side.
    from_rest = segment_motion(make_wrist_stream([(0.0, 0.5), (0.25, 0.5)]))
    assert [p.kind for p in from_rest] == [PhaseKind.REST]
    from_flight = segment_motion(make_wrist_stream([(1.0, 0.5), (0.25, 0.5)]))
    assert [p.kind for p in from_flight] == [PhaseKind.FLIGHT]


def test_short_blips_are_merged_away():
    # A 2-frame (66 ms) spike inside a long rest is below min_phase_ms.
    frames = make_wrist_stream([(0.0, 0.5), (1.0, 2 / 30), (0.0, 0.5)])
    phases = segment_motion(frames)
    assert [p.kind for p in phases] == [PhaseKind.REST]
    assert phases[0].start == frames[0].timestamp
    assert phases[0].end == frames[-1].timestamp


def test_single_frame_stream_yields_single_phase():
    frames = make_wrist_stream([(0.0, 1 / 30)])
    phases = segment_motion(frames)
    assert len(phases) == 1
    assert phases[0].start == phases[0].end == frames[0].timestamp


def test_empty_stream_yields_no_phases():
    assert segment_motion([]) == []


@pytest.mark.parametrize("seed", range(12))
def test_tiling_invariant_on_random_speed_spans(seed):
    rng = random.Random(seed)
    spans = [(rng.choice([0.0, 0.1, 0.5, 1.2]), rng.uniform(0.1, 0.8))
             for _ in range(rng.randint(1, 6))]
    frames = make_wrist_stream(spans)
    if not frames:
        return
    phases = segment_motion(frames)
    assert phases[0].start == frames[0].timestamp
    assert phases[-1].end == frames[-1].timestamp
    for a, b in zip(phases, phases[1:]):
        assert a.end == b.start
        assert a.kind != b.kind  # adjacent phases alternate after merging


# --- classification -----------------------------------------------------------------


@pytest.mark.parametrize("kind", GESTURE_KINDS)
def test_clean_gestures_classify_correctly(kind):
    frames, label = synth_gesture(kind, noise_sigma=0.0, seed=1)
    assert label == kind
    assert classify_stream(frames) == kind


@pytest.mark.parametrize("kind", GESTURE_KINDS)
def test_noisy_gestures_classify_correctly(kind):
    hits = 0
    for seed in range(10):
        frames, _ = synth_gesture(kind, noise_sigma=0.003, seed=seed)
        if classify_stream(frames) == kind:
            hits += 1
    assert hits >= 9


def test_wave_requires_direction_reversals():
    # A single fast straight sweep is flight without reversals: not a wave.
    frames = make_wrist_stream([(0.0, 0.4), (1.0, 0.5), (0.0, 0.4)])
    assert classify_stream(frames) != "wave"


def test_classifier_handles_empty_input():
    assert classify_gesture([]) == "none"


# --- streaming detector ----------------------------------------------------------------


def test_detector_emits_once_then_respects_refractory():
    frames, _ = synth_gesture("wave", noise_sigma=0.0, seed=2)
    detector = GestureDetector(window_s=4.0, refractory_s=10.0)
    emitted = [label for frame in frames
               if (label := detector.push(smooth_one(frame, detector))) is not None]
    assert emitted.count("wave") == 1


def smooth_one(frame: PoseFrame, detector: GestureDetector,
               _filters: dict = {}) -> PoseFrame:
    filt = _filters.setdefault(id(detector), PoseFilter())
    out = filt.filter_keypoints(frame)
    return out if out is not None else frame


def test_detector_stays_quiet_on_idle_stream():
    frames, _ = synth_gesture("none", noise_sigma=0.002, seed=3)
    detector = GestureDetector()
    filt = PoseFilter()
    for frame in frames:
        out = filt.filter_keypoints(frame)
        if out is None:
            continue
        assert detector.push(out) is None
