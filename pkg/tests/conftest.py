"""Shared fixtures and helpers for the test suite.

Also hosts a small terminal-summary plugin: every test in
``test_acceptance.py`` gets exactly one ``[PASS]``/``[FAIL]`` line in the
run summary, keyed by its docstring.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from groundedchat.actions import default_registry
from groundedchat.backend import FixtureEntry, ScriptFixture, ScriptedBackend
from groundedchat.chat import ChatSession, SessionConfig, start_session
from groundedchat.embodiment.executor import ExecutorConfig
from groundedchat.embodiment.speech import SynthConfig
from groundedchat.prompts import nicol_profile

GOLDEN_DIR = Path(__file__).parent / "golden"


def read_golden(name: str) -> str:
    return (GOLDEN_DIR / name).read_text(encoding="utf-8")


@pytest.fixture
def registry():
    return default_registry()


@pytest.fixture
def profile():
    return nicol_profile()


def replay_backend(responses: list[str]) -> ScriptedBackend:
    """Backend that replays canned responses in order, accepting any query."""
    return ScriptedBackend(
        ScriptFixture([FixtureEntry("normalized-prefix", "", r) for r in responses])
    )


def make_session(
    responses: list[str],
    initial_objects: list[str] | None = None,
    priming: bool = False,
    history_budget: int = 4000,
) -> ChatSession:
    """Scripted chat session with the counter clock (deterministic stamps)."""
    config = SessionConfig(history_budget=history_budget, priming_enabled=priming)
    return start_session(
        config,
        default_registry(),
        nicol_profile(),
        replay_backend(responses),
        initial_objects=initial_objects,
    )


def fast_synth() -> SynthConfig:
    """Millisecond-scale speech model so executor tests finish quickly."""
    return SynthConfig(latency_base=0.002, latency_per_char=0.0, duration_per_char=0.0002)


def fast_executor_config() -> ExecutorConfig:
    """Millisecond-scale motion durations; ordering semantics are unchanged."""
    return ExecutorConfig(look_duration=0.02, point_duration=0.03,
                          give_duration=0.04, motion_start=0.01)


@pytest.fixture
def free_port() -> int:
    import socket

    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


# --- acceptance-criterion reporting -----------------------------------------

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    outcome = "PASS" if report.passed else "FAIL"
    _ACCEPTANCE_RESULTS.append((outcome, report.nodeid.rsplit("::", 1)[-1]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for outcome, name in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{outcome}] {name}")
