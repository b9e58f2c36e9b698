"""Simulated tabletop world and robot state.

The table is an axis-aligned rectangle in robot frame; the user sits at the
far edge (maximum y).  Mutations go through a single lock; reads take
immutable snapshots.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace

from ..actions import ActionCall
from ..errors import ActionError, WorldError
from ..perception.tracking import WorldDiff

EXPRESSIONS = ("neutral", "happiness", "sadness", "surprise", "anger")

SPECIAL_TARGETS = {"look": ("user", "hand", "table")}


@dataclass
class TableObject:
    name: str
    position: tuple[float, float]
    present: bool = True


@dataclass(frozen=True)
class ArmAction:
    kind: str = "idle"            # idle | pointing | giving
    target: str | None = None

    def __str__(self) -> str:
        return self.kind if self.target is None else f"{self.kind}({self.target})"


@dataclass
class RobotState:
    expression: str = "neutral"
    gaze_target: str | None = None
    arm: ArmAction = field(default_factory=ArmAction)


@dataclass(frozen=True)
class WorldConfig:
    x_min: float = -0.6
    x_max: float = 0.6
    y_min: float = 0.0
    y_max: float = 0.8          # user edge
    push_distance: float = 0.25

    def contains(self, position: tuple[float, float]) -> bool:
        x, y = position
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True)
class WorldSnapshot:
    objects: tuple[TableObject, ...]
    robot_expression: str
    robot_gaze: str | None
    robot_arm: str

    def names(self) -> tuple[str, ...]:
        return tuple(o.name for o in self.objects)

    def position_of(self, name: str) -> tuple[float, float] | None:
        for o in self.objects:
            if o.name == name:
                return o.position
        return None


class TabletopWorld:
    def __init__(self, config: WorldConfig | None = None):
        self.config = config or WorldConfig()
        self.objects: dict[str, TableObject] = {}
        self.robot = RobotState()
        self.lock = threading.RLock()

    # -- table mutation ------------------------------------------------------

    def mutate_table(self, op: str, name: str,
                     position: tuple[float, float] | None = None) -> WorldDiff:
        with self.lock:
            if op == "add":
                if name in self.objects:
                    raise WorldError(f"object {name!r} already on the table")
                if position is None or not self.config.contains(position):
                    raise WorldError(f"position {position} outside table bounds")
                self.objects[name] = TableObject(name=name, position=tuple(position))
                return WorldDiff(added=[name])
            if op == "remove":
                if name not in self.objects:
                    raise WorldError(f"object {name!r} not on the table")
                del self.objects[name]
                return WorldDiff(removed=[name])
            if op == "move":
                if name not in self.objects:
                    raise WorldError(f"object {name!r} not on the table")
                if position is None or not self.config.contains(position):
                    raise WorldError(f"position {position} outside table bounds")
                self.objects[name].position = tuple(position)
                return WorldDiff()
            raise WorldError(f"unknown table op {op!r}")

    def names(self) -> list[str]:
        with self.lock:
            return list(self.objects)

    # -- robot actions ---------------------------------------------------------

    def apply_action(self, call: ActionCall):
        """Mutate robot/world state for one validated action call.  Raises
        ActionError(OBJECT_NOT_PRESENT) when a named object is required but
        absent; timed resets (pointing -> idle) are the executor's job."""
        with self.lock:
            action, arg = call.action, call.argument
            if action == "express":
                if arg not in EXPRESSIONS:
                    raise ActionError("BAD_ARGUMENT", f"unknown expression {arg!r}")
                self.robot.expression = arg
                return
            if action == "look":
                if arg not in SPECIAL_TARGETS["look"] and arg not in self.objects:
                    raise ActionError("OBJECT_NOT_PRESENT",
                                      f"cannot look at {arg!r}: not on the table")
                self.robot.gaze_target = arg
                return
            if action == "point":
                if arg != "user" and arg not in self.objects:
                    raise ActionError("OBJECT_NOT_PRESENT",
                                      f"cannot point at {arg!r}: not on the table")
                self.robot.arm = ArmAction("pointing", arg)
                return
            if action == "give":
                if arg not in self.objects:
                    raise ActionError("OBJECT_NOT_PRESENT",
                                      f"cannot give {arg!r}: not on the table")
                obj = self.objects[arg]
                x, y = obj.position
                y = min(y + self.config.push_distance, self.config.y_max)
                obj.position = (x, y)
                self.robot.arm = ArmAction("giving", arg)
                return
            raise ActionError("UNKNOWN_ACTION", f"no such action {action!r}")

    def reset_arm(self):
        with self.lock:
            self.robot.arm = ArmAction()

    def user_distance(self, name: str) -> float:
        """Distance from an object to the user edge of the table."""
        with self.lock:
            if name not in self.objects:
                raise WorldError(f"object {name!r} not on the table")
            return self.config.y_max - self.objects[name].position[1]

    def snapshot(self) -> WorldSnapshot:
        with self.lock:
            return WorldSnapshot(
                objects=tuple(replace(o) for o in self.objects.values()),
                robot_expression=self.robot.expression,
                robot_gaze=self.robot.gaze_target,
                robot_arm=str(self.robot.arm),
            )
