"""Command-line entry points: serve the gateway, run the evaluation tools."""

from __future__ import annotations

import sys

import click

from .actions import default_registry
from .errors import GroundedChatError
from .evaluation import (
    AttributeOracle,
    chat_report,
    game_report,
    game_report_header,
    load_game_fixture,
    load_objects,
    load_transcripts,
    run_guess_my_object,
    write_report_csv,
)
from .evaluation.game import scripted_session_factory
from .evaluation.metrics import format_value
from .gateway import create_app, load_config


@click.group()
def main():
    """Grounded-robot chat engine."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="JSON config file.")
@click.option("--host", default=None, help="Bind host (overrides config).")
@click.option("--port", type=int, default=None, help="Bind port (overrides config).")
def serve(config_path, host, port):
    """Run the HTTP/SSE gateway."""
    import uvicorn

    config = load_config(config_path)
    if host is not None:
        config.host = host
    if port is not None:
        config.port = port
    uvicorn.run(create_app(config), host=config.host, port=config.port)


@main.group(name="eval")
def eval_group():
    """Compute metric tables."""


def _print_rows(header, rows):
    click.echo("\t".join(header))
    for row in rows:
        click.echo("\t".join([row[0]] + [format_value(v) for v in row[1:]]))


@eval_group.command(name="chat")
@click.option("--transcripts", "transcripts_dir", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="Directory of *.jsonl transcript files.")
@click.option("--annotations", "annotations_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON annotation file keyed '<prompt_id>:<trial_index>'.")
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Output CSV path.")
@click.option("--persona", default="NICOL", show_default=True,
              help="Robot name used in the grounding row label.")
@click.option("--label", default="model", show_default=True,
              help="Column label for the value column.")
def eval_chat(transcripts_dir, annotations_file, out_path, persona, label):
    """Metric table over recorded chat transcripts."""
    try:
        transcripts = load_transcripts(transcripts_dir, annotations_file,
                                       default_registry())
        rows = chat_report(transcripts, persona=persona)
    except GroundedChatError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    header = ["Metric", label]
    write_report_csv(rows, out_path, header)
    _print_rows(header, rows)
    click.echo(f"wrote {out_path}")


@eval_group.command(name="game")
@click.option("--objects", "objects_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON object/attribute table.")
@click.option("--fixture", "fixture_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Scripted game fixture (responses + annotations).")
@click.option("--trials", default=5, show_default=True,
              help="Trials per object.")
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Output CSV path.")
def eval_game(objects_file, fixture_file, trials, out_path):
    """Run the scripted object-guessing game and report per-object metrics."""
    try:
        objects = load_objects(objects_file)
        fixture = load_game_fixture(fixture_file)
        factory = scripted_session_factory(fixture, objects)
        logs = run_guess_my_object(factory, objects, AttributeOracle(objects),
                                   trials_per_object=trials)
        rows = game_report(logs)
        header = game_report_header(logs)
    except GroundedChatError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    invalid = sum(1 for log in logs if not log.valid)
    if invalid:
        click.echo(f"warning: {invalid} invalid trial(s) excluded", err=True)
    write_report_csv(rows, out_path, header)
    _print_rows(header, rows)
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
