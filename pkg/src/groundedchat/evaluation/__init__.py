"""Transcript metrics and the object-guessing game harness."""

from .metrics import (
    Transcript,
    behavior_rates,
    chat_report,
    jaccard,
    jaccard_diversity,
    load_transcripts,
    response_length,
    token_set,
    write_report_csv,
)
from .game import (
    AttributeOracle,
    GameLog,
    GameObject,
    detect_guess,
    game_report,
    game_report_header,
    load_game_fixture,
    load_objects,
    run_guess_my_object,
)

__all__ = [
    "Transcript", "behavior_rates", "chat_report", "jaccard",
    "jaccard_diversity", "load_transcripts", "response_length", "token_set",
    "write_report_csv",
    "AttributeOracle", "GameLog", "GameObject", "detect_guess", "game_report",
    "game_report_header", "load_game_fixture", "load_objects",
    "run_guess_my_object",
]
