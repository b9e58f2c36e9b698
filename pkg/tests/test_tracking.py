"""Object tracker: association, lifecycle, naming, diffs, synthetic scenes."""

from __future__ import annotations

from itertools import permutations

import pytest

from groundedchat.perception.synth import SceneObject, SceneSpec, synth_scene
from groundedchat.perception.tracking import (
    Detection,
    ObjectTracker,
    TrackParams,
    TrackState,
    WorldDiff,
    iou,
    object_list,
    world_diff,
)


def det(x: float, y: float, label: str = "cup", frame: int = 0,
        size: float = 0.1, score: float = 1.0) -> Detection:
    return Detection(frame_index=frame, bbox=(x, y, size, size),
                     label=label, score=score)


# --- IoU -------------------------------------------------------------------------


def test_iou_identical_boxes():
    assert iou((0, 0, 2, 2), (0, 0, 2, 2)) == 1.0


def test_iou_half_overlap():
    # 1x2 intersection over 2*4 - 2 union
    assert iou((0, 0, 2, 2), (1, 0, 2, 2)) == pytest.approx(2 / 6)


def test_iou_disjoint_and_touching():
    assert iou((0, 0, 1, 1), (5, 5, 1, 1)) == 0.0
    assert iou((0, 0, 1, 1), (1, 0, 1, 1)) == 0.0  # edge contact: zero area


def test_detection_validation():
    with pytest.raises(ValueError):
        Detection(0, (0, 0, -1, 1), "cup")
    with pytest.raises(ValueError):
        Detection(0, (0, 0, 1, 1), "cup", score=1.5)
    with pytest.raises(ValueError):
        Detection(0, (0, 0, 1, 1), "")


# --- lifecycle -------------------------------------------------------------------


def test_confirmation_requires_min_hits():
    tracker = ObjectTracker()
    for frame in range(3):
        tracks = tracker.track_update([det(0.2, 0.2, frame=frame)])
    assert tracks[0].state is TrackState.CONFIRMED
    assert tracks[0].hits == 3


def test_track_stays_tentative_below_min_hits():
    tracker = ObjectTracker()
    tracks = tracker.track_update([det(0.2, 0.2)])
    tracks = tracker.track_update([det(0.2, 0.2)])
    assert tracks[0].state is TrackState.TENTATIVE
    assert tracker.object_list() == []


def test_track_dropped_after_max_misses():
    tracker = ObjectTracker(TrackParams(max_misses=3))
    for frame in range(3):
        tracker.track_update([det(0.2, 0.2, frame=frame)])
    for _ in range(3):
        tracks = tracker.track_update([])
        assert len(tracks) == 1  # still coasting
    tracks = tracker.track_update([])  # misses exceeds max: dropped
    assert tracks == []


def test_miss_counter_resets_on_rematch_but_hits_accumulate():
    tracker = ObjectTracker()
    for _ in range(3):
        tracker.track_update([det(0.2, 0.2)])
    tracker.track_update([])
    tracks = tracker.track_update([det(0.2, 0.2)])
    assert tracks[0].misses == 0
    assert tracks[0].hits == 4


def test_ids_are_never_reused():
    tracker = ObjectTracker(TrackParams(max_misses=0))
    first = tracker.track_update([det(0.2, 0.2)])[0].id
    tracker.track_update([])  # track lost immediately
    second = tracker.track_update([det(0.2, 0.2)])[0].id
    assert second > first


def test_gate_blocks_weak_overlap():
    tracker = ObjectTracker(TrackParams(iou_gate=0.3))
    tracker.track_update([det(0.2, 0.2)])
    tracks = tracker.track_update([det(0.29, 0.29)])  # tiny overlap, below gate
    assert len(tracks) == 2  # spawned a second track instead of matching


# --- labels and naming --------------------------------------------------------------


def test_plurality_label_wins():
    tracker = ObjectTracker()
    labels = ["cup", "cup", "bottle", "cup"]
    for frame, label in enumerate(labels):
        tracks = tracker.track_update([det(0.2, 0.2, label=label, frame=frame)])
    assert tracks[0].label == "cup"


def test_label_tie_breaks_most_recent():
    tracker = ObjectTracker()
    for frame, label in enumerate(["cup", "bottle"]):
        tracks = tracker.track_update([det(0.2, 0.2, label=label, frame=frame)])
    assert tracks[0].label == "bottle"
    tracks = tracker.track_update([det(0.2, 0.2, label="cup", frame=2)])
    assert tracks[0].label == "cup"


def test_vote_window_forgets_old_labels():
    tracker = ObjectTracker(TrackParams(vote_window=3))
    for frame, label in enumerate(["bottle", "bottle", "cup", "cup", "cup"]):
        tracks = tracker.track_update([det(0.2, 0.2, label=label, frame=frame)])
    assert list(tracks[0].label_votes) == ["cup", "cup", "cup"]


def test_object_list_ordinal_naming_in_confirmation_order():
    tracker = ObjectTracker()
    for frame in range(3):
        tracker.track_update([
            det(0.10, 0.10, label="lemon", frame=frame),
            det(0.50, 0.50, label="lemon", frame=frame),
            det(0.80, 0.80, label="pear", frame=frame),
        ])
    assert tracker.object_list() == ["lemon", "lemon 2", "pear"]


def test_object_list_excludes_tentative():
    tracker = ObjectTracker()
    tracker.track_update([det(0.2, 0.2, label="cup")])
    assert tracker.object_list() == []


# --- world diff -----------------------------------------------------------------------


def test_world_diff_order_preserving():
    diff = world_diff(["a", "b", "c"], ["b", "d", "c", "e"])
    assert diff.added == ("d", "e")
    assert diff.removed == ("a",)


def test_world_diff_empty_is_falsy():
    assert not world_diff(["a"], ["a"])
    assert world_diff([], ["a"])


def test_world_diff_carries_gestures():
    diff = WorldDiff(added=["a"], gestures=["wave"])
    assert diff.gestures == ("wave",)
    assert bool(diff)


# --- synthetic scene vs brute-force oracle ----------------------------------------------


def optimal_assignment(track_boxes: list, det_boxes: list, gate: float) -> set[tuple[int, int]]:
    """Max-total-IoU assignment by exhaustive enumeration (small N only).

    Each track gets either a distinct detection index or None; every
    injective mapping is scored and the best kept.
    """
    if not track_boxes or not det_boxes:
        return set()
    slots = list(range(len(det_boxes))) + [None] * len(track_boxes)
    best: set[tuple[int, int]] = set()
    best_score = -1.0
    for perm in set(permutations(slots, len(track_boxes))):
        pairs = set()
        score = 0.0
        for ti, di in enumerate(perm):
            if di is None:
                continue
            overlap = iou(track_boxes[ti], det_boxes[di])
            if overlap >= gate:
                pairs.add((ti, di))
                score += overlap
        if score > best_score:
            best_score = score
            best = pairs
    return best


def true_boxes(spec: SceneSpec, frame: int) -> list[tuple]:
    boxes = []
    for obj in spec.objects:
        x = min(max(obj.start[0] + obj.velocity[0] * frame, 0.0), 1.0 - obj.size[0])
        y = min(max(obj.start[1] + obj.velocity[1] * frame, 0.0), 1.0 - obj.size[1])
        boxes.append((x, y, *obj.size))
    return boxes


def centers_distance(a: tuple, b: tuple) -> float:
    ax, ay = a[0] + a[2] / 2, a[1] + a[3] / 2
    bx, by = b[0] + b[2] / 2, b[1] + b[3] / 2
    return ((ax - bx) ** 2 + (ay - by) ** 2) ** 0.5


SCENE = SceneSpec(
    objects=[
        SceneObject("lemon", start=(0.05, 0.10), velocity=(0.0015, 0.0)),
        SceneObject("banana", start=(0.45, 0.40), velocity=(-0.0010, 0.0008)),
        SceneObject("pear", start=(0.80, 0.75), velocity=(0.0, -0.0012)),
    ],
    n_frames=200,
    flicker_p=0.2,
    label_noise_p=0.1,
    jitter_sigma=0.004,
    seed=7,
)


def identify(spec: SceneSpec, frame: int, bbox: tuple) -> int:
    """Ground-truth object index for a (possibly jittered) detection bbox."""
    boxes = true_boxes(spec, frame)
    return min(range(len(boxes)), key=lambda i: centers_distance(boxes[i], bbox))


def test_tracker_matches_optimal_assignment_and_never_switches():
    frames = synth_scene(SCENE)
    tracker = ObjectTracker()
    identity_of_track: dict[int, int] = {}

    for frame_index, detections in enumerate(frames):
        prior = list(tracker.tracks)
        prior_boxes = [t.bbox for t in prior]
        oracle = optimal_assignment(prior_boxes, [d.bbox for d in detections],
                                    tracker.params.iou_gate)
        tracker.track_update(detections)

        greedy = set()
        for ti, track in enumerate(prior):
            for di, d in enumerate(detections):
                if track.bbox == d.bbox:
                    greedy.add((ti, di))
        assert greedy == oracle, f"frame {frame_index}: greedy {greedy} != {oracle}"

        # Identity bookkeeping: a track must never change ground-truth object.
        for track in tracker.tracks:
            matched = [d for d in detections if d.bbox == track.bbox]
            if not matched:
                continue
            truth = identify(SCENE, frame_index, matched[0].bbox)
            previous = identity_of_track.setdefault(track.id, truth)
            assert previous == truth, f"track {track.id} switched object"

    confirmed = [t for t in tracker.tracks if t.state is TrackState.CONFIRMED]
    assert len(confirmed) == 3
    assert sorted(t.label for t in confirmed) == ["banana", "lemon", "pear"]


def test_synth_scene_is_deterministic():
    a = synth_scene(SCENE)
    b = synth_scene(SCENE)
    assert a == b


def test_label_reports_settle_despite_noise():
    frames = synth_scene(SCENE)
    tracker = ObjectTracker()
    correct = total = 0
    for frame_index, detections in enumerate(frames):
        tracker.track_update(detections)
        if frame_index < 15:
            continue
        total += 1
        if sorted(tracker.object_list()) == ["banana", "lemon", "pear"]:
            correct += 1
    assert total > 0
    assert correct / total >= 0.99
