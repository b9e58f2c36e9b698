"""Prompt template assets and rendering.

Templates live as versioned text assets under ``assets/`` with named
placeholders ({identity}, {action_list}, {robot_name}, {utterance},
{objects}, {gesture}).  Rendering is deterministic: fixed inputs yield
byte-identical prompts, which the golden tests pin down.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .actions import ActionRegistry
from .errors import ConfigurationError, PreconditionError

PROMPTS_VERSION = "1"


def _asset(name: str) -> str:
    return resources.files("groundedchat.assets").joinpath(name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class RobotProfile:
    """Identity text block grounding the model in a first-person robot."""

    name: str
    identity: str


def nicol_profile() -> RobotProfile:
    return RobotProfile(name="NICOL", identity=_asset("nicol_identity.txt"))


def render_system_prompt(profile: RobotProfile, registry: ActionRegistry) -> str:
    """Grounding system prompt: identity block, one line per action in
    registry order, then the angle-bracket usage instructions."""
    if len(registry) == 0:
        raise ConfigurationError("action registry must not be empty")
    template = _asset("system_prompt.tmpl")
    action_list = "\n".join(spec.prompt_line() for spec in registry)
    return template.format(identity=profile.identity, action_list=action_list)


def priming_query() -> str:
    """One-time internal query asking the model for action-use examples."""
    return _asset("priming_query.txt")


def user_query(robot_name: str, utterance: str) -> str:
    """Augment a raw user utterance with the first-person reconfirmation."""
    return _asset("user_query.tmpl").format(robot_name=robot_name, utterance=utterance)


def object_facts_query(objects: list[str]) -> str:
    """Internal query eliciting facts about newly seen objects."""
    return _asset("object_facts.tmpl").format(objects=", ".join(objects))


def _status_templates() -> dict[str, str]:
    lines = {}
    for line in _asset("status_update.tmpl").splitlines():
        key, _, text = line.partition(": ")
        lines[key] = text
    return lines


_STATUS = None


_LIST_VARIANTS = ("initial_list", "changed_list")


def status_line(variant: str, objects: list[str] | None = None) -> str:
    """One of the four object status-update lines."""
    global _STATUS
    if _STATUS is None:
        _STATUS = _status_templates()
    if variant not in _STATUS:
        raise PreconditionError(f"unknown status variant {variant!r}")
    if variant in _LIST_VARIANTS and not objects:
        raise PreconditionError(f"status variant {variant!r} requires objects")
    text = _STATUS[variant]
    if objects is not None:
        text = text.format(objects=", ".join(objects))
    return text


def gesture_line(gesture: str) -> str:
    return status_line("gesture").format(gesture=gesture)


def acknowledge_line() -> str:
    return status_line("acknowledge")
