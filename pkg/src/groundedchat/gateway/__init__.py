"""HTTP/SSE gateway: session lifecycle, world mutation, gesture injection,
and the live event stream."""

from .app import create_app
from .config import AppConfig, load_config
from .runtime import (
    EventBuffer,
    SessionRuntime,
    TurnInProgress,
    create_runtime,
    plan_to_dict,
)

__all__ = [
    "AppConfig", "EventBuffer", "SessionRuntime", "TurnInProgress",
    "create_app", "create_runtime", "load_config", "plan_to_dict",
]
