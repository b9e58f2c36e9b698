"""Driver and scoring for the yes/no object-guessing game.

Each trial: the rules are explained (the robot asks its first question in
reply), the driver relays truthful yes/no answers from an attribute table,
a final guess is detected with an "is it the X" pattern, and the trial ends
with a reasoning check and an agreement check whose pass/fail verdicts come
from fixture annotations (they are judgements about free text, never
auto-scored).  The question budget is a hard cap of 4 including the guess.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..chat import ChatSession
from ..errors import BackendError, PreconditionError
from .metrics import format_value

logger = logging.getLogger(__name__)

MAX_QUESTIONS = 4

INTRO_TEXT = (
    "Let's play a game called Guess My Object. I am thinking of exactly one "
    "of the objects on the table. You may ask me up to {max_questions} yes/no "
    "questions to work out which object it is, and guessing the object also "
    "counts as one question. Ask me your first question now."
)
WIN_REASONING_TEXT = ("Yes, that is correct, you win! Can you explain the "
                      "strategy you used to find my object?")
LOSS_REASONING_TEXT = ("You did not find my object. I was thinking of the "
                       "{target}. Can you identify any flaw in the questions "
                       "you asked?")
AGREEMENT_TEXT = ("To confirm we understand each other: which object was I "
                  "thinking of?")

_GUESS_RE = re.compile(r"\bis\s+it\s+(?:the|a|an)?\s*([a-z][a-z ]*)", re.IGNORECASE)


@dataclass(frozen=True)
class GameObject:
    name: str                      # table label, lowercase ("lemon")
    attributes: dict               # phrase -> bool, e.g. {"yellow": True}

    @property
    def display(self) -> str:
        return self.name.capitalize()


@dataclass
class GameLog:
    target: str
    questions: list[tuple[str, str]] = field(default_factory=list)
    outcome: str = "loss"          # win | loss
    reasoning_pass: bool = False
    agreement_pass: bool = False
    expressive: bool = False
    motion_used: bool = False
    anomaly_count: int = 0
    valid: bool = True


class AttributeOracle:
    """Truthful yes/no answers from per-object attribute tables.  A question
    matches the attribute phrases it literally contains; any matched phrase
    being true of the target yields "yes"."""

    def __init__(self, objects: list[GameObject]):
        self.objects = {o.name: o for o in objects}

    def answer(self, question: str, target: str) -> str:
        attrs = self.objects[target].attributes
        q = question.lower()
        matched = [phrase for phrase in attrs if phrase.lower() in q]
        if not matched:
            raise PreconditionError(
                f"no attribute of {target!r} matches the question {question!r}"
            )
        return "yes" if any(attrs[m] for m in matched) else "no"


def detect_guess(text: str, names: list[str]) -> str | None:
    """Return the guessed object name if the text contains an
    "is it (the) X" pattern naming a known object."""
    for match in _GUESS_RE.finditer(text):
        tail = match.group(1).lower()
        for name in names:
            if tail.startswith(name.lower()):
                return name
    return None


def run_guess_my_object(session_factory, objects: list[GameObject],
                        answer_oracle: AttributeOracle,
                        trials_per_object: int = 5,
                        max_questions: int = MAX_QUESTIONS) -> list[GameLog]:
    """Run every trial of the full protocol.  ``session_factory(target,
    trial_index)`` returns (ChatSession, annotations) where annotations holds
    the human verdicts {"reasoning_ok": bool, "agreement_ok": bool}."""
    names = [o.name for o in objects]
    logs: list[GameLog] = []
    for obj in objects:
        for trial in range(trials_per_object):
            log = GameLog(target=obj.name)
            try:
                session, annotations = session_factory(obj.name, trial)
                _run_trial(session, obj, names, answer_oracle, annotations,
                           max_questions, log)
            except (BackendError, PreconditionError) as exc:
                logger.warning("trial %s/%d invalid: %s", obj.name, trial, exc)
                log.valid = False
            logs.append(log)
    return logs


def _run_trial(session: ChatSession, target: GameObject, names: list[str],
               oracle: AttributeOracle, annotations: dict,
               max_questions: int, log: GameLog):
    plans = []

    def turn(text: str):
        plan = session.user_turn(text)
        plans.append(plan)
        return plan

    plan = turn(INTRO_TEXT.format(max_questions=max_questions))
    outcome = None
    while outcome is None:
        text = plan.spoken_text()
        guess = detect_guess(text, names)
        if guess is None and "?" not in text:
            raise PreconditionError(f"expected a question, got {text!r}")
        if guess is not None:
            answer = "yes" if guess == target.name else "no"
        else:
            answer = oracle.answer(text, target.name)
        log.questions.append((text, answer))
        if guess is not None and answer == "yes":
            outcome = "win"
        elif len(log.questions) >= max_questions:
            outcome = "loss"
        else:
            plan = turn("Yes." if answer == "yes" else "No.")
    log.outcome = outcome

    if outcome == "win":
        turn(WIN_REASONING_TEXT)
    else:
        turn(LOSS_REASONING_TEXT.format(target=target.name))
    turn(AGREEMENT_TEXT)

    log.reasoning_pass = bool(annotations["reasoning_ok"])
    log.agreement_pass = bool(annotations["agreement_ok"])
    log.expressive = any(c.action == "express" for p in plans for c in p.actions())
    log.motion_used = any(c.action in ("look", "point", "give")
                          for p in plans for c in p.actions())
    log.anomaly_count = sum(len(p.anomalies) for p in plans)


def game_report(logs: list[GameLog]) -> list[tuple]:
    """Per-object metric table.  Ratios with an empty denominator (e.g. loss
    explanation when every trial was won) are reported as "-"."""
    valid = [l for l in logs if l.valid]
    if not valid:
        raise PreconditionError("no valid trials")
    order: list[str] = []
    for log in valid:
        if log.target not in order:
            order.append(log.target)

    def ratio(values: list) -> float | str:
        return "-" if not values else sum(values) / len(values)

    columns = {}
    for name in order:
        trials = [l for l in valid if l.target == name]
        wins = [l for l in trials if l.outcome == "win"]
        losses = [l for l in trials if l.outcome == "loss"]
        columns[name] = {
            "Win rate": ratio([1 if l.outcome == "win" else 0 for l in trials]),
            "Questions asked": ratio([len(l.questions) for l in wins]),
            "Win explanation": ratio([1 if l.reasoning_pass else 0 for l in wins]),
            "Loss explanation": ratio([1 if l.reasoning_pass else 0 for l in losses]),
            "Expressiveness": ratio([1 if l.expressive else 0 for l in trials]),
            "Motion used": ratio([1 if l.motion_used else 0 for l in trials]),
            "Agreement": ratio([1 if l.agreement_pass else 0 for l in trials]),
            "Minor anomalies": ratio([1 if l.anomaly_count else 0 for l in trials]),
        }
    labels = ["Win rate", "Questions asked", "Win explanation", "Loss explanation",
              "Expressiveness", "Motion used", "Agreement", "Minor anomalies"]
    return [tuple([label] + [columns[name][label] for name in order])
            for label in labels]


def game_report_header(logs: list[GameLog]) -> list[str]:
    order: list[str] = []
    for log in logs:
        if log.valid and log.target not in order:
            order.append(log.target)
    return ["Object"] + [name.capitalize() for name in order]


# -- fixture files ---------------------------------------------------------------

def load_objects(path: str | Path) -> list[GameObject]:
    """objects file: {"objects": [{"name": ..., "attributes": {...}}, ...]}"""
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    objects = [GameObject(name=o["name"], attributes=o["attributes"])
               for o in data["objects"]]
    if not objects:
        raise PreconditionError(f"no objects in {path}")
    return objects


def load_game_fixture(path: str | Path) -> dict:
    """Game fixture: {"trials": {"<target>:<trial>": {"responses": [...],
    "annotations": {"reasoning_ok": ..., "agreement_ok": ...}}}}

    Each trial's responses are the assistant texts in session order: the
    object-facts answer, the status-update acknowledgement, then one text per
    conversational turn (first question, follow-up questions/guess, reasoning
    answer, agreement answer)."""
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if "trials" not in data:
        raise PreconditionError(f"{path} has no trials")
    return data


def scripted_session_factory(fixture_data: dict, objects: list[GameObject],
                             registry=None, profile=None):
    """Session factory replaying fixture responses in order.  Prompt
    matching is left open (empty prefix) because the driver's own prompts
    are what is under test; strict ordering still applies."""
    from ..actions import default_registry
    from ..backend import FixtureEntry, ScriptFixture, ScriptedBackend
    from ..chat import SessionConfig, start_session
    from ..prompts import nicol_profile

    names = [o.name for o in objects]
    priming = bool(fixture_data.get("priming", False))

    def factory(target: str, trial: int):
        key = f"{target}:{trial}"
        if key not in fixture_data["trials"]:
            raise PreconditionError(f"fixture has no trial {key}")
        trial_data = fixture_data["trials"][key]
        entries = [FixtureEntry("normalized-prefix", "", r)
                   for r in trial_data["responses"]]
        backend = ScriptedBackend(ScriptFixture(entries))
        config = SessionConfig(priming_enabled=priming)
        session = start_session(config, registry or default_registry(),
                                profile or nicol_profile(), backend,
                                initial_objects=names)
        return session, trial_data["annotations"]

    return factory
