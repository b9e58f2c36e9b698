"""Motion segmentation and rule-based gesture classification.

A smoothed pose window is partitioned into alternating FLIGHT/REST phases by
hysteresis thresholding of wrist speed; short phases are merged into their
neighbours so the output tiles the window exactly.  Gestures are recognized
from simple per-phase features of the active arm (the 14-keypoint skeleton
has no fingers, so grasp/stop are arm-posture proxies):

  wave   FLIGHT with >= 2 horizontal wrist reversals while above the elbow
  stop   REST with the wrist between elbow and shoulder heights, forearm
         vertical and laterally still, right after a FLIGHT raise
  pause  REST of >= 1 s with the wrist held above the shoulder
  grasp  FLIGHT that decelerates into the table plane
  none   anything else

At most one gesture is reported per window, in the precedence order above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .one_euro import PoseFrame


class PhaseKind(str, Enum):
    FLIGHT = "flight"
    REST = "rest"


@dataclass(frozen=True)
class MotionPhase:
    kind: PhaseKind
    start: float
    end: float
    frames: tuple[PoseFrame, ...]

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass
class GestureParams:
    speed_hi: float = 0.35        # image units / s, REST -> FLIGHT
    speed_lo: float = 0.15        # FLIGHT -> REST
    min_phase_ms: float = 150.0
    wave_min_reversals: int = 2
    wave_deadband: float = 0.008  # ignore sub-jitter x steps when counting reversals
    pause_min_s: float = 1.0
    stop_min_s: float = 0.4
    stop_forearm_ratio: float = 0.35
    stop_lateral_std: float = 0.02
    raise_min: float = 0.05
    grasp_table_y: float = 0.72   # image y of the table plane (y-down)
    grasp_table_tol: float = 0.06
    grasp_min_drop: float = 0.10


def _wrist_speeds(frames: list[PoseFrame], side: str) -> list[float]:
    speeds = [0.0]
    for prev, curr in zip(frames, frames[1:]):
        dt = curr.timestamp - prev.timestamp
        (x0, y0), (x1, y1) = prev.point(f"{side}_wrist"), curr.point(f"{side}_wrist")
        speeds.append(math.hypot(x1 - x0, y1 - y0) / dt if dt > 0 else 0.0)
    return speeds


def _active_side(frames: list[PoseFrame]) -> str:
    travel = {}
    for side in ("r", "l"):
        pts = [f.point(f"{side}_wrist") for f in frames]
        travel[side] = sum(math.hypot(b[0] - a[0], b[1] - a[1])
                           for a, b in zip(pts, pts[1:]))
    return max(travel, key=travel.get)


def segment_motion(frames: list[PoseFrame],
                   params: GestureParams | None = None) -> list[MotionPhase]:
    """Hysteresis segmentation of a pose window into FLIGHT/REST phases that
    tile [first, last] timestamp with no gaps or overlaps."""
    params = params or GestureParams()
    if len(frames) < 2:
        if not frames:
            return []
        t = frames[0].timestamp
        return [MotionPhase(PhaseKind.REST, t, t, tuple(frames))]
    r_speed = _wrist_speeds(frames, "r")
    l_speed = _wrist_speeds(frames, "l")
    speeds = [max(a, b) for a, b in zip(r_speed, l_speed)]

    state = PhaseKind.FLIGHT if speeds[1] > params.speed_hi else PhaseKind.REST
    runs: list[list] = [[state, 0, 1]]  # [kind, first_index, last_index_exclusive]
    for i in range(1, len(frames)):
        if state is PhaseKind.REST and speeds[i] > params.speed_hi:
            state = PhaseKind.FLIGHT
        elif state is PhaseKind.FLIGHT and speeds[i] < params.speed_lo:
            state = PhaseKind.REST
        if state is runs[-1][0]:
            runs[-1][2] = i + 1
        else:
            runs.append([state, i, i + 1])

    min_s = params.min_phase_ms / 1000.0

    def boundaries(rs: list[list]) -> list[float]:
        bounds = [frames[0].timestamp]
        bounds.extend(frames[r[1]].timestamp for r in rs[1:])
        bounds.append(frames[-1].timestamp)
        return bounds

    merged = True
    while merged and len(runs) > 1:
        merged = False
        bounds = boundaries(runs)
        for k in range(len(runs)):
            if bounds[k + 1] - bounds[k] < min_s:
                if k > 0:
                    runs[k - 1][2] = runs[k][2]
                    del runs[k]
                else:
                    runs[1][1] = runs[0][1]
                    del runs[0]
                # coalesce any same-kind neighbours the deletion exposed
                j = 1
                while j < len(runs):
                    if runs[j][0] is runs[j - 1][0]:
                        runs[j - 1][2] = runs[j][2]
                        del runs[j]
                    else:
                        j += 1
                merged = True
                break

    bounds = boundaries(runs)
    return [
        MotionPhase(kind=run[0], start=bounds[k], end=bounds[k + 1],
                    frames=tuple(frames[run[1]:run[2]]))
        for k, run in enumerate(runs)
    ]


def _means(frames: tuple[PoseFrame, ...], name: str) -> tuple[float, float]:
    xs = [f.point(name)[0] for f in frames]
    ys = [f.point(name)[1] for f in frames]
    return sum(xs) / len(xs), sum(ys) / len(ys)


def _x_reversals(frames: tuple[PoseFrame, ...], side: str, deadband: float) -> int:
    xs = [f.point(f"{side}_wrist")[0] for f in frames]
    steps = [b - a for a, b in zip(xs, xs[1:]) if abs(b - a) > deadband]
    reversals = 0
    for a, b in zip(steps, steps[1:]):
        if (a > 0) != (b > 0):
            reversals += 1
    return reversals


def classify_gesture(phases: list[MotionPhase],
                     params: GestureParams | None = None) -> str:
    params = params or GestureParams()
    if not phases:
        return "none"
    all_frames = [f for p in phases for f in p.frames]
    side = _active_side(all_frames)

    # wave: oscillating raised wrist during flight
    for phase in phases:
        if phase.kind is not PhaseKind.FLIGHT or len(phase.frames) < 3:
            continue
        wx, wy = _means(phase.frames, f"{side}_wrist")
        _, ey = _means(phase.frames, f"{side}_elbow")
        if wy < ey and _x_reversals(phase.frames, side, params.wave_deadband) >= params.wave_min_reversals:
            return "wave"

    # stop: vertical forearm held between elbow and shoulder after a raise
    for k, phase in enumerate(phases):
        if phase.kind is not PhaseKind.REST or phase.duration < params.stop_min_s:
            continue
        if not phase.frames:
            continue
        wx, wy = _means(phase.frames, f"{side}_wrist")
        ex, ey = _means(phase.frames, f"{side}_elbow")
        _, sy = _means(phase.frames, f"{side}_shoulder")
        if not (sy < wy < ey):
            continue
        forearm = math.hypot(wx - ex, wy - ey)
        if forearm <= 0 or abs(wx - ex) > params.stop_forearm_ratio * forearm:
            continue
        xs = [f.point(f"{side}_wrist")[0] for f in phase.frames]
        mean_x = sum(xs) / len(xs)
        lateral_std = math.sqrt(sum((x - mean_x) ** 2 for x in xs) / len(xs))
        if lateral_std > params.stop_lateral_std:
            continue
        if k > 0 and phases[k - 1].kind is PhaseKind.FLIGHT and phases[k - 1].frames:
            y_start = phases[k - 1].frames[0].point(f"{side}_wrist")[1]
            y_end = phases[k - 1].frames[-1].point(f"{side}_wrist")[1]
            if y_start - y_end >= params.raise_min:
                return "stop"

    # pause: long hold with the wrist above the shoulder
    for phase in phases:
        if phase.kind is not PhaseKind.REST or phase.duration < params.pause_min_s:
            continue
        if not phase.frames:
            continue
        _, wy = _means(phase.frames, f"{side}_wrist")
        _, sy = _means(phase.frames, f"{side}_shoulder")
        if wy < sy:
            return "pause"

    # grasp: decelerating reach that ends at the table plane
    for phase in phases:
        if phase.kind is not PhaseKind.FLIGHT or len(phase.frames) < 4:
            continue
        y_start = phase.frames[0].point(f"{side}_wrist")[1]
        y_end = phase.frames[-1].point(f"{side}_wrist")[1]
        if abs(y_end - params.grasp_table_y) > params.grasp_table_tol:
            continue
        if y_end - y_start < params.grasp_min_drop:
            continue
        speeds = _wrist_speeds(list(phase.frames), side)[1:]
        tail = speeds[-max(1, len(speeds) // 4):]
        if max(speeds) > 0 and sum(tail) / len(tail) < 0.5 * max(speeds):
            return "grasp"

    return "none"


class GestureDetector:
    """Streaming wrapper: keeps a sliding window of smoothed frames, runs
    segmentation + classification, and enforces a refractory period so one
    physical gesture is reported once."""

    def __init__(self, params: GestureParams | None = None,
                 window_s: float = 2.5, refractory_s: float = 1.0):
        self.params = params or GestureParams()
        self.window_s = window_s
        self.refractory_s = refractory_s
        self._frames: list[PoseFrame] = []
        self._refractory_until = -math.inf

    def push(self, frame: PoseFrame) -> str | None:
        self._frames.append(frame)
        cutoff = frame.timestamp - self.window_s
        while self._frames and self._frames[0].timestamp < cutoff:
            self._frames.pop(0)
        if len(self._frames) < 8 or frame.timestamp < self._refractory_until:
            return None
        phases = segment_motion(self._frames, self.params)
        label = classify_gesture(phases, self.params)
        if label == "none":
            return None
        self._refractory_until = frame.timestamp + self.refractory_s
        self._frames.clear()
        return label
