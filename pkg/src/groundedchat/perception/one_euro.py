"""1€ filter for keypoint streams.

Per coordinate: exponential smoothing whose cutoff adapts to the estimated
speed, f_c = f_c_min + beta * |v_hat|, with smoothing factor
alpha = 1 / (1 + tau / t_e) and tau = 1 / (2 * pi * f_c).  The derivative is
taken against the previous raw sample and pre-filtered at a fixed d_cutoff.
The first sample passes through unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import PreconditionError

KEYPOINT_NAMES = (
    "head", "neck",
    "r_shoulder", "r_elbow", "r_wrist",
    "l_shoulder", "l_elbow", "l_wrist",
    "r_hip", "r_knee", "r_ankle",
    "l_hip", "l_knee", "l_ankle",
)
KP = {name: i for i, name in enumerate(KEYPOINT_NAMES)}


@dataclass(frozen=True)
class PoseFrame:
    """One pose sample: 14 keypoints as (x, y, confidence) in image units,
    y increasing downwards."""
    timestamp: float
    keypoints: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if len(self.keypoints) != len(KEYPOINT_NAMES):
            raise ValueError(
                f"expected {len(KEYPOINT_NAMES)} keypoints, got {len(self.keypoints)}"
            )

    def point(self, name: str) -> tuple[float, float]:
        x, y, _ = self.keypoints[KP[name]]
        return x, y


def smoothing_factor(t_e: float, cutoff: float) -> float:
    tau = 1.0 / (2.0 * math.pi * cutoff)
    return 1.0 / (1.0 + tau / t_e)


class OneEuroFilter:
    def __init__(self, f_c_min: float = 1.0, beta: float = 0.007,
                 d_cutoff: float = 1.0):
        self.f_c_min = f_c_min
        self.beta = beta
        self.d_cutoff = d_cutoff
        self.t_prev: float | None = None
        self.raw_prev: float | None = None
        self.dx_prev = 0.0
        self.x_hat_prev: float | None = None

    def __call__(self, t: float, x: float) -> float:
        if self.t_prev is None:
            self.t_prev, self.raw_prev, self.x_hat_prev = t, x, x
            return x
        t_e = t - self.t_prev
        if t_e <= 0.0:
            raise PreconditionError(f"non-increasing timestamp {t} after {self.t_prev}")
        dx = (x - self.raw_prev) / t_e
        a_d = smoothing_factor(t_e, self.d_cutoff)
        # Incremental form of a * dx + (1 - a) * prev: exact at the fixed
        # point, so a constant input passes through bit-identically.
        dx_hat = self.dx_prev + a_d * (dx - self.dx_prev)
        cutoff = self.f_c_min + self.beta * abs(dx_hat)
        a = smoothing_factor(t_e, cutoff)
        x_hat = self.x_hat_prev + a * (x - self.x_hat_prev)
        self.t_prev, self.raw_prev = t, x
        self.dx_prev, self.x_hat_prev = dx_hat, x_hat
        return x_hat


class PoseFilter:
    """Applies an independent 1€ filter to each keypoint coordinate.
    Confidences pass through untouched.  A frame whose timestamp does not
    strictly increase is rejected (returns None, filter state unchanged)."""

    def __init__(self, f_c_min: float = 1.0, beta: float = 0.007,
                 d_cutoff: float = 1.0):
        self._filters = [
            (OneEuroFilter(f_c_min, beta, d_cutoff),
             OneEuroFilter(f_c_min, beta, d_cutoff))
            for _ in KEYPOINT_NAMES
        ]
        self._t_prev: float | None = None

    def filter_keypoints(self, frame: PoseFrame) -> PoseFrame | None:
        if self._t_prev is not None and frame.timestamp <= self._t_prev:
            return None
        smoothed = []
        for (fx, fy), (x, y, c) in zip(self._filters, frame.keypoints):
            smoothed.append((fx(frame.timestamp, x), fy(frame.timestamp, y), c))
        self._t_prev = frame.timestamp
        return PoseFrame(timestamp=frame.timestamp, keypoints=tuple(smoothed))
