"""groundedchat: grounds a chat LLM in a simulated tabletop robot — inline
action tags in the model's replies are parsed, filtered, and executed against
a simulated world while speech is pre-cached and played back in order."""

__version__ = "0.1.0"

from .actions import (
    ActionCall,
    ActionRegistry,
    ActionSpec,
    Anomaly,
    AnomalyReason,
    ResponsePlan,
    ResponseSegment,
    SegmentKind,
    default_registry,
    extract_thoughts,
    normalize_action_tag,
    parse_response,
    render_plan,
    split_sentences,
)
from .prompts import RobotProfile, nicol_profile, render_system_prompt

__all__ = [
    "ActionCall", "ActionRegistry", "ActionSpec", "Anomaly", "AnomalyReason",
    "ResponsePlan", "ResponseSegment", "SegmentKind", "default_registry",
    "extract_thoughts", "normalize_action_tag", "parse_response",
    "render_plan", "split_sentences",
    "RobotProfile", "nicol_profile", "render_system_prompt",
    "__version__",
]
