"""Perception pipeline: detection tracking, keypoint smoothing, motion
segmentation, gesture classification, and synthetic stream generators."""

from .tracking import (
    Detection,
    ObjectTracker,
    Track,
    TrackParams,
    TrackState,
    WorldDiff,
    iou,
    object_list,
    world_diff,
)
from .one_euro import (
    KEYPOINT_NAMES,
    KP,
    OneEuroFilter,
    PoseFilter,
    PoseFrame,
    smoothing_factor,
)
from .gestures import (
    GestureDetector,
    GestureParams,
    MotionPhase,
    PhaseKind,
    classify_gesture,
    segment_motion,
)
from .synth import SceneObject, SceneSpec, synth_gesture, synth_scene

__all__ = [
    "Detection", "ObjectTracker", "Track", "TrackParams", "TrackState",
    "WorldDiff", "iou", "object_list", "world_diff",
    "KEYPOINT_NAMES", "KP", "OneEuroFilter", "PoseFilter", "PoseFrame",
    "smoothing_factor",
    "GestureDetector", "GestureParams", "MotionPhase", "PhaseKind",
    "classify_gesture", "segment_motion",
    "SceneObject", "SceneSpec", "synth_gesture", "synth_scene",
]
