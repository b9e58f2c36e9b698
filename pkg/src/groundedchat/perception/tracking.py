"""Greedy IoU tracker that turns flickery per-frame detections into a stable
object list.

Detections are associated to existing tracks by best IoU above a gate,
greedily, ties broken by higher IoU then higher detection score.  Tracks
confirm after ``min_hits`` total hits and die after ``max_misses``
consecutive misses; IDs are never reused within a run.  Reported labels are
a plurality vote over the last ``vote_window`` associated labels, ties going
to the most recent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum


@dataclass(frozen=True)
class Detection:
    frame_index: int
    bbox: tuple[float, float, float, float]  # x, y, w, h in normalized image units
    label: str
    score: float = 1.0

    def __post_init__(self):
        x, y, w, h = self.bbox
        if w <= 0 or h <= 0:
            raise ValueError(f"degenerate bbox {self.bbox}")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")
        if not self.label:
            raise ValueError("label must be nonempty")


class TrackState(str, Enum):
    TENTATIVE = "tentative"
    CONFIRMED = "confirmed"
    LOST = "lost"


@dataclass
class Track:
    id: int
    bbox: tuple[float, float, float, float]
    label_votes: deque
    hits: int = 1
    misses: int = 0
    state: TrackState = TrackState.TENTATIVE
    confirmed_order: int | None = None

    @property
    def label(self) -> str:
        """Plurality vote over the window; ties go to the most recent vote."""
        counts: dict[str, int] = {}
        last_seen: dict[str, int] = {}
        for i, lab in enumerate(self.label_votes):
            counts[lab] = counts.get(lab, 0) + 1
            last_seen[lab] = i
        return max(counts, key=lambda lab: (counts[lab], last_seen[lab]))


@dataclass
class TrackParams:
    iou_gate: float = 0.3
    min_hits: int = 3
    max_misses: int = 10
    vote_window: int = 9


def iou(a: tuple[float, float, float, float],
        b: tuple[float, float, float, float]) -> float:
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    ix = max(0.0, min(ax + aw, bx + bw) - max(ax, bx))
    iy = max(0.0, min(ay + ah, by + bh) - max(ay, by))
    inter = ix * iy
    if inter <= 0.0:
        return 0.0
    return inter / (aw * ah + bw * bh - inter)


class ObjectTracker:
    """Stateful per-frame tracker.  LOST tracks are dropped from the active
    list; their IDs are retired forever."""

    def __init__(self, params: TrackParams | None = None):
        self.params = params or TrackParams()
        self.tracks: list[Track] = []
        self._next_id = 1
        self._confirm_seq = 0

    def track_update(self, detections: list[Detection]) -> list[Track]:
        p = self.params
        pairs = []
        for ti, track in enumerate(self.tracks):
            for di, det in enumerate(detections):
                overlap = iou(track.bbox, det.bbox)
                if overlap >= p.iou_gate:
                    pairs.append((-overlap, -det.score, ti, di))
        pairs.sort()
        used_tracks: set[int] = set()
        used_dets: set[int] = set()
        for _, _, ti, di in pairs:
            if ti in used_tracks or di in used_dets:
                continue
            used_tracks.add(ti)
            used_dets.add(di)
            track, det = self.tracks[ti], detections[di]
            track.bbox = det.bbox
            track.hits += 1
            track.misses = 0
            track.label_votes.append(det.label)
            if track.state is TrackState.TENTATIVE and track.hits >= p.min_hits:
                track.state = TrackState.CONFIRMED
                track.confirmed_order = self._confirm_seq
                self._confirm_seq += 1
        for ti, track in enumerate(self.tracks):
            if ti not in used_tracks:
                track.misses += 1
                if track.misses > p.max_misses:
                    track.state = TrackState.LOST
        for di, det in enumerate(detections):
            if di not in used_dets:
                self.tracks.append(Track(
                    id=self._next_id, bbox=det.bbox,
                    label_votes=deque([det.label], maxlen=p.vote_window),
                ))
                self._next_id += 1
        self.tracks = [t for t in self.tracks if t.state is not TrackState.LOST]
        return self.tracks

    def object_list(self) -> list[str]:
        return object_list(self.tracks)


def object_list(tracks: list[Track]) -> list[str]:
    """Names of CONFIRMED tracks in order of first confirmation, duplicate
    labels disambiguated with ordinal suffixes ("lemon", "lemon 2")."""
    confirmed = sorted(
        (t for t in tracks if t.state is TrackState.CONFIRMED),
        key=lambda t: t.confirmed_order,
    )
    names: list[str] = []
    seen: dict[str, int] = {}
    for track in confirmed:
        label = track.label
        n = seen.get(label, 0) + 1
        seen[label] = n
        names.append(label if n == 1 else f"{label} {n}")
    return names


@dataclass(frozen=True)
class WorldDiff:
    """Membership change in the visible object list, plus any gestures
    detected since the last report."""
    added: tuple[str, ...] = ()
    removed: tuple[str, ...] = ()
    gestures: tuple[str, ...] = ()

    def __init__(self, added=(), removed=(), gestures=()):
        object.__setattr__(self, "added", tuple(added))
        object.__setattr__(self, "removed", tuple(removed))
        object.__setattr__(self, "gestures", tuple(gestures))

    def __bool__(self) -> bool:
        return bool(self.added or self.removed or self.gestures)


def world_diff(prev_names: list[str], curr_names: list[str]) -> WorldDiff:
    """Order-preserving set difference between two object lists."""
    prev, curr = set(prev_names), set(curr_names)
    return WorldDiff(
        added=[n for n in curr_names if n not in prev],
        removed=[n for n in prev_names if n not in curr],
    )
