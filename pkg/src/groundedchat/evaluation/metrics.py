"""Chat-analysis metrics over recorded transcripts.

Response length is a mean approximate token count; response similarity is
the mean pairwise Jaccard index of lowercased token sets, computed within
each prompt's trials and then averaged over prompts (higher = less diverse).
Behaviour rates count executed ACTION segments only — filtered anomalies
never contribute.  The subjective rows (task completion, grounding,
reasoning, communication) come from an annotation file and are never judged
automatically.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from ..actions import ActionRegistry, ResponsePlan, parse_response
from ..backend import tokenize
from ..errors import PreconditionError

ANNOTATION_KEYS = ("task_completed", "grounded", "reasoning_ok", "communication_ok")


@dataclass(frozen=True)
class Transcript:
    prompt_id: str
    trial_index: int
    raw_answer: str
    plan: ResponsePlan
    annotations: dict

    def __post_init__(self):
        missing = [k for k in ANNOTATION_KEYS if k not in self.annotations]
        if missing:
            raise PreconditionError(f"transcript missing annotations: {missing}")
        unknown = [k for k in self.annotations if k not in ANNOTATION_KEYS]
        if unknown:
            raise PreconditionError(f"unknown annotation keys: {unknown}")


def token_set(text: str) -> frozenset[str]:
    return frozenset(tok.lower() for tok in tokenize(text))


def response_length(answers: list[str]) -> float:
    if not answers:
        raise PreconditionError("no answers")
    return sum(len(tokenize(a)) for a in answers) / len(answers)


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    union = a | b
    return len(a & b) / len(union)


def jaccard_diversity(answers: list[str]) -> float:
    """Mean pairwise Jaccard index over all unordered answer pairs."""
    if len(answers) < 2:
        raise PreconditionError("need at least two answers")
    sets = [token_set(a) for a in answers]
    pairs = list(combinations(sets, 2))
    return sum(jaccard(a, b) for a, b in pairs) / len(pairs)


def behavior_rates(plans: list[ResponsePlan]) -> dict[str, float]:
    if not plans:
        raise PreconditionError("no plans")
    expressive = sum(
        1 for p in plans if any(c.action == "express" for c in p.actions())
    )
    manip = sum(
        1 for p in plans
        if any(c.action in ("look", "point", "give") for c in p.actions())
    )
    return {
        "expressiveness": expressive / len(plans),
        "perception_manipulation": manip / len(plans),
    }


def chat_report(transcripts: list[Transcript],
                persona: str = "NICOL") -> list[tuple[str, float]]:
    """Full metric table over a transcript set, one (label, value) row per
    metric, in presentation order."""
    if not transcripts:
        raise PreconditionError("empty transcript set")
    by_prompt: dict[str, list[str]] = {}
    for t in transcripts:
        by_prompt.setdefault(t.prompt_id, []).append(t.raw_answer)
    multi = [answers for answers in by_prompt.values() if len(answers) >= 2]
    if not multi:
        raise PreconditionError("similarity needs at least one prompt with >= 2 trials")
    similarity = sum(jaccard_diversity(a) for a in multi) / len(multi)

    rates = behavior_rates([t.plan for t in transcripts])
    n = len(transcripts)

    def annotation_rate(key: str) -> float:
        return sum(1 for t in transcripts if t.annotations[key]) / n

    return [
        ("Response length", response_length([t.raw_answer for t in transcripts])),
        ("Response similarity", similarity),
        ("Task completion", annotation_rate("task_completed")),
        (f"Grounding as {persona}", annotation_rate("grounded")),
        ("Perception & manip.", rates["perception_manipulation"]),
        ("Expressiveness", rates["expressiveness"]),
        ("Reasoning skills", annotation_rate("reasoning_ok")),
        ("Communication skills", annotation_rate("communication_ok")),
    ]


# -- file formats --------------------------------------------------------------

def load_transcripts(transcripts_dir: str | Path, annotations_file: str | Path,
                     registry: ActionRegistry) -> list[Transcript]:
    """Transcripts: *.jsonl files of {prompt_id, trial_index, answer} records.
    Annotations: one JSON object keyed "<prompt_id>:<trial_index>"."""
    with open(annotations_file, encoding="utf-8") as f:
        annotations = json.load(f)
    transcripts = []
    for path in sorted(Path(transcripts_dir).glob("*.jsonl")):
        with open(path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                key = f"{rec['prompt_id']}:{rec['trial_index']}"
                if key not in annotations:
                    raise PreconditionError(f"no annotations for {key}")
                transcripts.append(Transcript(
                    prompt_id=rec["prompt_id"],
                    trial_index=rec["trial_index"],
                    raw_answer=rec["answer"],
                    plan=parse_response(rec["answer"], registry),
                    annotations=annotations[key],
                ))
    if not transcripts:
        raise PreconditionError(f"no transcript records under {transcripts_dir}")
    return transcripts


def format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, float) and value == int(value):
        return str(int(value))
    return f"{value:.6g}" if isinstance(value, float) else str(value)


def write_report_csv(rows: list[tuple], path: str | Path, header: list[str]):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[0]] + [format_value(v) for v in row[1:]])
