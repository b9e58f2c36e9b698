"""Deterministic synthetic streams for exercising the perception pipeline:
detection scenes with flicker and label noise, and labeled pose sequences
for each supported gesture.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .one_euro import KEYPOINT_NAMES, PoseFrame
from .tracking import Detection


@dataclass(frozen=True)
class SceneObject:
    label: str
    start: tuple[float, float]          # bbox top-left at frame 0
    velocity: tuple[float, float] = (0.0, 0.0)  # units per frame
    size: tuple[float, float] = (0.12, 0.12)


@dataclass
class SceneSpec:
    objects: list[SceneObject]
    n_frames: int
    flicker_p: float = 0.0
    label_noise_p: float = 0.0
    jitter_sigma: float = 0.0
    seed: int = 0
    confusions: tuple[str, ...] = ("bottle", "cup", "box")

    def __post_init__(self):
        for p in (self.flicker_p, self.label_noise_p):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} outside [0, 1]")

    @classmethod
    def from_dict(cls, data: dict) -> "SceneSpec":
        objects = [
            SceneObject(label=o["label"], start=tuple(o["start"]),
                        velocity=tuple(o.get("velocity", (0.0, 0.0))),
                        size=tuple(o.get("size", (0.12, 0.12))))
            for o in data["objects"]
        ]
        return cls(objects=objects, n_frames=data["n_frames"],
                   flicker_p=data.get("flicker_p", 0.0),
                   label_noise_p=data.get("label_noise_p", 0.0),
                   jitter_sigma=data.get("jitter_sigma", 0.0),
                   seed=data.get("seed", 0),
                   confusions=tuple(data.get("confusions", ("bottle", "cup", "box"))))


def load_scene(path) -> SceneSpec:
    with open(path, encoding="utf-8") as f:
        return SceneSpec.from_dict(json.load(f))


def synth_scene(spec: SceneSpec) -> list[list[Detection]]:
    """Frame-major detection stream: each detection may be dropped with
    flicker_p and its label corrupted with label_noise_p (drawn from the
    scene's other labels plus a fixed confusion pool, never the true one)."""
    rng = random.Random(spec.seed)
    scene_labels = [o.label for o in spec.objects]
    frames: list[list[Detection]] = []
    for k in range(spec.n_frames):
        dets: list[Detection] = []
        for obj in spec.objects:
            x = min(max(obj.start[0] + obj.velocity[0] * k, 0.0), 1.0 - obj.size[0])
            y = min(max(obj.start[1] + obj.velocity[1] * k, 0.0), 1.0 - obj.size[1])
            if rng.random() < spec.flicker_p:
                continue
            label = obj.label
            if rng.random() < spec.label_noise_p:
                pool = [l for l in (*scene_labels, *spec.confusions) if l != obj.label]
                label = rng.choice(pool)
            if spec.jitter_sigma:
                x += rng.gauss(0.0, spec.jitter_sigma)
                y += rng.gauss(0.0, spec.jitter_sigma)
            dets.append(Detection(frame_index=k, bbox=(x, y, *obj.size),
                                  label=label, score=0.5 + 0.5 * rng.random()))
        frames.append(dets)
    return frames


# -- gesture streams ---------------------------------------------------------

_BASE = {
    "head": (0.50, 0.15), "neck": (0.50, 0.22),
    "r_shoulder": (0.43, 0.25), "r_elbow": (0.41, 0.38), "r_wrist": (0.40, 0.50),
    "l_shoulder": (0.57, 0.25), "l_elbow": (0.59, 0.38), "l_wrist": (0.60, 0.50),
    "r_hip": (0.46, 0.52), "r_knee": (0.46, 0.72), "r_ankle": (0.46, 0.90),
    "l_hip": (0.54, 0.52), "l_knee": (0.54, 0.72), "l_ankle": (0.54, 0.90),
}

_W0 = _BASE["r_wrist"]
_E0 = _BASE["r_elbow"]

GESTURE_KINDS = ("wave", "grasp", "pause", "stop", "none")


def _lerp(a, b, u):
    return (a[0] + (b[0] - a[0]) * u, a[1] + (b[1] - a[1]) * u)


def _hold(w, e):
    return lambda u, t: (w, e)


def _move(w0, w1, e0, e1, ease=False):
    def fn(u, t):
        if ease:
            # Cubic ease-out: fast launch, pronounced terminal deceleration,
            # the shape of a natural reach-to-surface motion.
            u = 1.0 - (1.0 - u) ** 3
        return _lerp(w0, w1, u), _lerp(e0, e1, u)
    return fn


def _script(kind: str):
    """Per-gesture arm script: list of (duration_s, fn(u, t_local) ->
    (wrist, elbow)).  All other keypoints stay at the base pose."""
    if kind == "wave":
        up_w, up_e = (0.40, 0.20), (0.41, 0.30)

        def oscillate(u, t):
            return (up_w[0] + 0.08 * math.sin(2.0 * math.pi * 2.0 * t), up_w[1]), up_e

        return [
            (0.5, _hold(_W0, _E0)),
            (0.3, _move(_W0, up_w, _E0, up_e)),
            (1.5, oscillate),
            (0.3, _move(up_w, _W0, up_e, _E0)),
            (0.4, _hold(_W0, _E0)),
        ]
    if kind == "pause":
        up_w, up_e = (0.40, 0.18), (0.41, 0.30)
        return [
            (0.4, _hold(_W0, _E0)),
            (0.35, _move(_W0, up_w, _E0, up_e)),
            (1.5, _hold(up_w, up_e)),
            (0.35, _move(up_w, _W0, up_e, _E0)),
            (0.4, _hold(_W0, _E0)),
        ]
    if kind == "stop":
        up_w = (0.41, 0.30)  # directly above the (unmoved) elbow
        return [
            (0.4, _hold(_W0, _E0)),
            (0.3, _move(_W0, up_w, _E0, _E0)),
            (0.8, _hold(up_w, _E0)),
            (0.3, _move(up_w, _W0, _E0, _E0)),
            (0.4, _hold(_W0, _E0)),
        ]
    if kind == "grasp":
        down_w, down_e = (0.45, 0.72), (0.43, 0.55)
        return [
            (0.4, _hold(_W0, _E0)),
            (0.6, _move(_W0, down_w, _E0, down_e, ease=True)),
            (0.6, _hold(down_w, down_e)),
        ]
    if kind == "none":
        def drift(u, t):
            return (_W0[0] + 0.01 * math.sin(2.0 * math.pi * 0.2 * t), _W0[1]), _E0

        return [(2.5, drift)]
    raise ValueError(f"unknown gesture kind {kind!r}")


def synth_gesture(kind: str, noise_sigma: float = 0.0, seed: int = 0,
                  fps: float = 30.0) -> tuple[list[PoseFrame], str]:
    """Pose stream acting out one gesture (right arm), with optional
    Gaussian keypoint noise.  Returns (frames, ground-truth label)."""
    rng = random.Random(seed)
    script = _script(kind)
    total = sum(d for d, _ in script)
    n = int(total * fps)
    frames: list[PoseFrame] = []
    for i in range(n):
        t = i / fps
        remaining, fn, local = t, script[-1][1], script[-1][0]
        for dur, seg_fn in script:
            if remaining <= dur:
                fn, local = seg_fn, remaining
                break
            remaining -= dur
        u = local / dur if dur > 0 else 1.0
        wrist, elbow = fn(min(u, 1.0), local)
        pose = dict(_BASE)
        pose["r_wrist"], pose["r_elbow"] = wrist, elbow
        keypoints = tuple(
            (pose[name][0] + rng.gauss(0.0, noise_sigma),
             pose[name][1] + rng.gauss(0.0, noise_sigma), 1.0)
            if noise_sigma else (*pose[name], 1.0)
            for name in KEYPOINT_NAMES
        )
        frames.append(PoseFrame(timestamp=t, keypoints=keypoints))
    return frames, kind
