"""Object-guessing game driver: guess detection, oracle, protocol, report."""

from __future__ import annotations

import json

import pytest

from groundedchat.errors import PreconditionError
from groundedchat.evaluation.game import (
    MAX_QUESTIONS,
    AttributeOracle,
    GameObject,
    detect_guess,
    game_report,
    game_report_header,
    load_game_fixture,
    load_objects,
    run_guess_my_object,
    scripted_session_factory,
)

OBJECTS = [
    GameObject("banana", {"yellow": True, "sour": False, "fruit": True}),
    GameObject("lemon", {"yellow": True, "sour": True, "fruit": True}),
]
ORACLE = AttributeOracle(OBJECTS)


# --- guess detection -------------------------------------------------------------


def test_detect_guess_variants():
    names = ["banana", "lemon", "red bowl"]
    assert detect_guess("Is it the banana?", names) == "banana"
    assert detect_guess("is it a lemon, perhaps?", names) == "lemon"
    assert detect_guess("IS IT THE LEMON?", names) == "lemon"
    assert detect_guess("Hmm... is it the red bowl?", names) == "red bowl"
    assert detect_guess("My final answer: is it banana?", names) == "banana"


def test_detect_guess_ignores_non_objects():
    names = ["banana", "lemon"]
    assert detect_guess("Is it yellow?", names) is None
    assert detect_guess("Is it a fruit?", names) is None
    assert detect_guess("What color is it?", names) is None


# --- attribute oracle --------------------------------------------------------------


def test_oracle_answers_truthfully():
    assert ORACLE.answer("Is the object yellow?", "banana") == "yes"
    assert ORACLE.answer("Is the object sour?", "banana") == "no"
    assert ORACLE.answer("Is the object sour?", "lemon") == "yes"


def test_oracle_matches_case_insensitively():
    assert ORACLE.answer("Would you call it YELLOW in color?", "lemon") == "yes"


def test_oracle_any_true_match_wins():
    assert ORACLE.answer("Is it yellow or sour?", "banana") == "yes"


def test_oracle_rejects_unanswerable_question():
    with pytest.raises(PreconditionError):
        ORACLE.answer("Does it have wheels?", "banana")


# --- full protocol against a hand-scored fixture ---------------------------------------


def fixture_data() -> dict:
    """Two objects x two trials, scored by hand below."""
    return {"trials": {
        # banana:0 — win in 2 questions; anomaly in the explanation text.
        "banana:0": {
            "responses": [
                "Some facts about those objects.",
                "Understood.",
                "Is the object yellow?",
                "Is it the banana?",
                "I used color to extend<arm> narrow it down.",
                "You were thinking of the banana.",
            ],
            "annotations": {"reasoning_ok": True, "agreement_ok": True},
        },
        # banana:1 — win in 2; expressive first question.
        "banana:1": {
            "responses": [
                "Some facts about those objects.",
                "Understood.",
                "<express(happiness)> Is it a fruit?",
                "Is it the banana?",
                "I asked about category first.",
                "The banana.",
            ],
            "annotations": {"reasoning_ok": True, "agreement_ok": True},
        },
        # lemon:0 — win in 2; motion in the agreement answer.
        "lemon:0": {
            "responses": [
                "Some facts about those objects.",
                "Understood.",
                "Is the object sour?",
                "Is it the lemon?",
                "Sourness singles out the lemon.",
                "<point(lemon)> You meant the lemon.",
            ],
            "annotations": {"reasoning_ok": True, "agreement_ok": True},
        },
        # lemon:1 — loss at the 4-question cap, wrong guess on question 3.
        "lemon:1": {
            "responses": [
                "Some facts about those objects.",
                "Understood.",
                "Is the object yellow?",
                "Is the object a fruit?",
                "Is it the banana?",
                "Is the object sour?",
                "I wasted questions on shared attributes.",
                "You were thinking of the lemon.",
            ],
            "annotations": {"reasoning_ok": False, "agreement_ok": False},
        },
    }}


def run_fixture():
    factory = scripted_session_factory(fixture_data(), OBJECTS)
    return run_guess_my_object(factory, OBJECTS, ORACLE, trials_per_object=2)


def test_trial_outcomes_and_question_counts():
    logs = run_fixture()
    assert [l.target for l in logs] == ["banana", "banana", "lemon", "lemon"]
    assert [l.outcome for l in logs] == ["win", "win", "win", "loss"]
    assert [len(l.questions) for l in logs] == [2, 2, 2, 4]
    assert all(l.valid for l in logs)


def test_question_cap_is_hard_and_counts_the_guess():
    logs = run_fixture()
    loss = logs[3]
    assert len(loss.questions) == MAX_QUESTIONS
    # The wrong guess is recorded as a question with answer "no".
    assert loss.questions[2] == ("Is it the banana?", "no")


def test_behavior_flags_scan_every_turn():
    logs = run_fixture()
    assert [l.expressive for l in logs] == [False, True, False, False]
    assert [l.motion_used for l in logs] == [False, False, True, False]
    assert [l.anomaly_count for l in logs] == [1, 0, 0, 0]


def test_game_report_matches_hand_scores():
    logs = run_fixture()
    rows = {row[0]: row[1:] for row in game_report(logs)}
    assert game_report_header(logs) == ["Object", "Banana", "Lemon"]
    assert rows["Win rate"] == (1.0, 0.5)
    assert rows["Questions asked"] == (2.0, 2.0)      # wins only
    assert rows["Win explanation"] == (1.0, 1.0)
    assert rows["Loss explanation"] == ("-", 0.0)     # banana never lost
    assert rows["Expressiveness"] == (0.5, 0.0)
    assert rows["Motion used"] == (0.0, 0.5)
    assert rows["Agreement"] == (1.0, 0.5)
    assert rows["Minor anomalies"] == (0.5, 0.0)


def test_report_row_order_is_stable():
    logs = run_fixture()
    assert [row[0] for row in game_report(logs)] == [
        "Win rate", "Questions asked", "Win explanation", "Loss explanation",
        "Expressiveness", "Motion used", "Agreement", "Minor anomalies",
    ]


# --- robustness -----------------------------------------------------------------------


def test_missing_trial_marks_log_invalid():
    data = fixture_data()
    del data["trials"]["lemon:1"]
    factory = scripted_session_factory(data, OBJECTS)
    logs = run_guess_my_object(factory, OBJECTS, ORACLE, trials_per_object=2)
    assert [l.valid for l in logs] == [True, True, True, False]
    rows = {row[0]: row[1:] for row in game_report(logs)}
    assert rows["Win rate"] == (1.0, 1.0)  # invalid trial excluded


def test_protocol_violation_marks_log_invalid():
    data = fixture_data()
    # Robot output that is neither a question nor a guess.
    data["trials"]["banana:0"]["responses"][2] = "I refuse to play."
    factory = scripted_session_factory(data, OBJECTS)
    logs = run_guess_my_object(factory, OBJECTS, ORACLE, trials_per_object=2)
    assert logs[0].valid is False
    assert all(l.valid for l in logs[1:])


def test_report_requires_at_least_one_valid_trial():
    data = {"trials": {}}
    factory = scripted_session_factory(data, OBJECTS)
    logs = run_guess_my_object(factory, OBJECTS, ORACLE, trials_per_object=1)
    with pytest.raises(PreconditionError):
        game_report(logs)


# --- fixture files ----------------------------------------------------------------------


def test_load_objects_and_fixture_files(tmp_path):
    objects_path = tmp_path / "objects.json"
    objects_path.write_text(json.dumps({"objects": [
        {"name": "banana", "attributes": {"yellow": True}},
    ]}), encoding="utf-8")
    loaded = load_objects(objects_path)
    assert loaded[0].name == "banana"
    assert loaded[0].display == "Banana"

    fixture_path = tmp_path / "game.json"
    fixture_path.write_text(json.dumps(fixture_data()), encoding="utf-8")
    data = load_game_fixture(fixture_path)
    assert "banana:0" in data["trials"]

    empty_path = tmp_path / "empty.json"
    empty_path.write_text(json.dumps({"objects": []}), encoding="utf-8")
    with pytest.raises(PreconditionError):
        load_objects(empty_path)


def test_load_game_fixture_requires_trials_key(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{}", encoding="utf-8")
    with pytest.raises(PreconditionError):
        load_game_fixture(path)
