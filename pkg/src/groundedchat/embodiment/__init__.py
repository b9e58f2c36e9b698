"""Simulated embodiment: tabletop world, robot state, speech pipeline, and
sequential plan execution."""

from .world import (
    EXPRESSIONS,
    ArmAction,
    RobotState,
    TableObject,
    TabletopWorld,
    WorldConfig,
    WorldSnapshot,
)
from .speech import MockSynthesizer, SynthConfig, UtteranceHandle
from .executor import EventKind, ExecutionEvent, ExecutorConfig, PlanExecutor

__all__ = [
    "EXPRESSIONS", "ArmAction", "RobotState", "TableObject", "TabletopWorld",
    "WorldConfig", "WorldSnapshot",
    "MockSynthesizer", "SynthConfig", "UtteranceHandle",
    "EventKind", "ExecutionEvent", "ExecutorConfig", "PlanExecutor",
]
