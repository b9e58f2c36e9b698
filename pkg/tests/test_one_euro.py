"""Adaptive low-pass filter: reference recurrence, fixed points, pose frames."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groundedchat.errors import PreconditionError
from groundedchat.perception.one_euro import (
    KEYPOINT_NAMES,
    OneEuroFilter,
    PoseFilter,
    PoseFrame,
    smoothing_factor,
)


def reference_filter(samples: list[tuple[float, float]], f_c_min: float,
                     beta: float, d_cutoff: float) -> list[float]:
    """Step-by-step textbook recurrence, written independently of the
    production class: convex-combination updates, explicit tau/alpha algebra."""
    outputs = []
    t_prev = x_prev = x_hat = None
    dx_hat = 0.0
    for t, x in samples:
        if t_prev is None:
            outputs.append(x)
            t_prev, x_prev, x_hat = t, x, x
            continue
        t_e = t - t_prev
        tau_d = 1.0 / (2.0 * math.pi * d_cutoff)
        alpha_d = 1.0 / (1.0 + tau_d / t_e)
        dx = (x - x_prev) / t_e
        dx_hat = alpha_d * dx + (1.0 - alpha_d) * dx_hat
        f_c = f_c_min + beta * abs(dx_hat)
        tau = 1.0 / (2.0 * math.pi * f_c)
        alpha = 1.0 / (1.0 + tau / t_e)
        x_hat = alpha * x + (1.0 - alpha) * x_hat
        outputs.append(x_hat)
        t_prev, x_prev = t, x
    return outputs


def noisy_ramp(n: int, seed: int = 0) -> list[tuple[float, float]]:
    rng = random.Random(seed)
    return [(i / 60.0, 0.5 * (i / 60.0) + rng.gauss(0.0, 0.05)) for i in range(n)]


def test_matches_reference_recurrence_on_noisy_ramp():
    samples = noisy_ramp(1000)
    expected = reference_filter(samples, f_c_min=1.0, beta=0.007, d_cutoff=1.0)
    filt = OneEuroFilter(f_c_min=1.0, beta=0.007, d_cutoff=1.0)
    for (t, x), ref in zip(samples, expected):
        assert filt(t, x) == pytest.approx(ref, abs=1e-9)


def test_matches_reference_with_aggressive_settings():
    samples = noisy_ramp(500, seed=3)
    expected = reference_filter(samples, f_c_min=0.3, beta=2.0, d_cutoff=0.5)
    filt = OneEuroFilter(f_c_min=0.3, beta=2.0, d_cutoff=0.5)
    for (t, x), ref in zip(samples, expected):
        assert filt(t, x) == pytest.approx(ref, abs=1e-9)


def test_first_sample_passes_through():
    filt = OneEuroFilter()
    assert filt(0.25, 123.456) == 123.456


def test_constant_input_is_exact_fixed_point():
    filt = OneEuroFilter()
    value = 0.1234567890123
    for i in range(100):
        assert filt(i / 30.0, value) == value  # bit-identical, not approx


def test_beta_zero_equals_fixed_cutoff_exponential_filter():
    f_c = 0.8
    samples = noisy_ramp(300, seed=5)
    filt = OneEuroFilter(f_c_min=f_c, beta=0.0, d_cutoff=1.0)

    ema = None
    for t, x in samples:
        got = filt(t, x)
        if ema is None:
            t_prev, ema = t, x
            assert got == x
            continue
        a = smoothing_factor(t - t_prev, f_c)
        ema = ema + a * (x - ema)
        t_prev = t
        assert got == ema  # exact: identical arithmetic once beta is 0


def test_smoothing_factor_monotonic_in_cutoff_and_interval():
    assert smoothing_factor(1 / 30.0, 2.0) > smoothing_factor(1 / 30.0, 1.0)
    assert smoothing_factor(1 / 15.0, 1.0) > smoothing_factor(1 / 30.0, 1.0)
    assert 0.0 < smoothing_factor(1 / 30.0, 1.0) < 1.0


def test_higher_beta_tracks_fast_motion_more_closely():
    samples = [(i / 60.0, math.sin(8.0 * i / 60.0)) for i in range(300)]
    slow = OneEuroFilter(f_c_min=0.5, beta=0.0)
    fast = OneEuroFilter(f_c_min=0.5, beta=5.0)
    err_slow = err_fast = 0.0
    for t, x in samples:
        err_slow += abs(slow(t, x) - x)
        err_fast += abs(fast(t, x) - x)
    assert err_fast < err_slow


def test_non_increasing_timestamp_rejected():
    filt = OneEuroFilter()
    filt(1.0, 0.0)
    with pytest.raises(PreconditionError):
        filt(1.0, 0.5)
    with pytest.raises(PreconditionError):
        filt(0.5, 0.5)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(min_value=-100, max_value=100, allow_nan=False,
                          allow_infinity=False), min_size=2, max_size=50))
def test_output_bounded_by_input_envelope(values):
    """Exponential smoothing is a convex combination: outputs never leave
    the running min/max envelope of the inputs."""
    filt = OneEuroFilter()
    lo = hi = values[0]
    for i, x in enumerate(values):
        lo, hi = min(lo, x), max(hi, x)
        y = filt(i / 30.0, x)
        assert lo - 1e-9 <= y <= hi + 1e-9


# --- pose frames ----------------------------------------------------------------


def pose(t: float, xy: tuple[float, float] = (0.5, 0.5)) -> PoseFrame:
    return PoseFrame(timestamp=t,
                     keypoints=tuple((xy[0], xy[1], 0.9) for _ in KEYPOINT_NAMES))


def test_pose_frame_requires_full_skeleton():
    with pytest.raises(ValueError):
        PoseFrame(timestamp=0.0, keypoints=((0.0, 0.0, 1.0),) * 13)


def test_pose_filter_passes_confidence_through():
    filt = PoseFilter()
    frame = pose(0.0)
    out = filt.filter_keypoints(frame)
    assert out is not None
    assert all(c == 0.9 for _, _, c in out.keypoints)


def test_pose_filter_rejects_stale_frames_without_state_damage():
    filt = PoseFilter()
    assert filt.filter_keypoints(pose(0.0)) is not None
    assert filt.filter_keypoints(pose(0.0)) is None
    assert filt.filter_keypoints(pose(-1.0)) is None
    out = filt.filter_keypoints(pose(1.0 / 30.0, (0.6, 0.6)))
    assert out is not None


def test_pose_filter_smooths_each_coordinate_independently():
    filt = PoseFilter(f_c_min=1.0, beta=0.0)
    filt.filter_keypoints(pose(0.0, (0.0, 0.0)))
    out = filt.filter_keypoints(pose(1 / 30.0, (1.0, 1.0)))
    x, y, _ = out.keypoints[0]
    assert 0.0 < x < 1.0 and 0.0 < y < 1.0
    assert x == y  # identical inputs, identical filters
