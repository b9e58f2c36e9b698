"""Prompt rendering: byte-equality against golden files plus shape checks."""

from __future__ import annotations

import pytest

from groundedchat import prompts
from groundedchat.actions import default_registry
from groundedchat.errors import PreconditionError

from conftest import read_golden


def test_system_prompt_matches_golden(profile, registry):
    rendered = prompts.render_system_prompt(profile, registry)
    assert rendered == read_golden("system_prompt.txt")


def test_system_prompt_lists_all_actions(profile, registry):
    rendered = prompts.render_system_prompt(profile, registry)
    for heading in ("express(emotion):", "look(object):",
                    "point(object):", "give(object):"):
        assert heading in rendered


def test_status_initial_empty_golden():
    assert prompts.status_line("initial_empty") == read_golden(
        "status_updates/initial_empty.txt")


def test_status_initial_list_golden():
    assert prompts.status_line("initial_list", ["pear", "lemon"]) == read_golden(
        "status_updates/initial_list.txt")


def test_status_changed_list_golden():
    line = prompts.status_line("changed_list", ["banana", "pear", "lemon", "red bowl"])
    assert line == read_golden("status_updates/changed_list.txt")


def test_status_all_removed_golden():
    assert prompts.status_line("all_removed") == read_golden(
        "status_updates/all_removed.txt")


def test_acknowledge_golden():
    assert prompts.acknowledge_line() == read_golden("status_updates/acknowledge.txt")


def test_priming_query_golden():
    assert prompts.priming_query() == read_golden("priming_query.txt")


def test_user_query_golden():
    line = prompts.user_query("NICOL", "Can you show me the banana?")
    assert line == read_golden("user_query.txt")


def test_object_facts_golden():
    line = prompts.object_facts_query(
        ["lemon", "tomato soup can", "baseball", "jello box"])
    assert line == read_golden("object_facts.txt")


def test_gesture_line_phrasing():
    assert prompts.gesture_line("wave") == "The user has just made a wave gesture."


def test_status_line_rejects_unknown_variant():
    with pytest.raises(PreconditionError):
        prompts.status_line("bogus_variant")


def test_list_variants_require_objects():
    with pytest.raises(PreconditionError):
        prompts.status_line("initial_list")
    with pytest.raises(PreconditionError):
        prompts.status_line("changed_list", [])


def test_profile_name_threaded_through_user_query():
    line = prompts.user_query("Pepper", "Hello?")
    assert "the Pepper robot" in line
    assert line.endswith("Hello?")
