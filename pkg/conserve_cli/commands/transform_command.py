"""Passive player transform command."""

import logging
from pathlib import Path

from conserve_cli.business.transform_logic import (
    augmented_game,
    passive_payoff_maximizers,
    transform_game,
)
from conserve_cli.commands.common import load_inputs, wants_json
from conserve_cli.utils.display import (
    display_panel,
    display_table,
    print_json_document,
    print_success,
)
from conserve_cli.utils.formatting import (
    payoff_columns,
    payoff_rows,
    transform_summary_lines,
    transform_to_dict,
)
from conserve_cli.utils.game_file import GameMetadata, emit_game

logger = logging.getLogger(__name__)


def _write_output(args, game_file, result) -> Path:
    augmented = bool(getattr(args, "augmented", False))
    game = augmented_game(result) if augmented else result.transformed_game
    suffix = "augmented" if augmented else "transformed"
    metadata = GameMetadata(
        title=f"{game_file.title} ({suffix})",
        source=game_file.metadata.source,
    )
    path = Path(args.output)
    path.write_text(emit_game(game, metadata), encoding="utf-8")
    logger.info(f"Wrote {suffix} game to {path}")
    return path


def transform_command(args):
    game_file, settings = load_inputs(args)
    game = game_file.game

    result = transform_game(game, settings)
    maximizers = passive_payoff_maximizers(result, settings.tolerance)

    if getattr(args, "output", None):
        path = _write_output(args, game_file, result)
        if not wants_json(args):
            print_success(f"Transformed game written to {path}")

    if wants_json(args):
        print_json_document(
            {"title": game_file.title, "transform": transform_to_dict(result, maximizers)}
        )
        return

    display_table(
        f"Passive Player Transform: {game_file.title}",
        payoff_columns(game),
        payoff_rows(game, result),
    )
    display_panel(
        "Transform Summary",
        transform_summary_lines(result, maximizers),
        border_style="green",
    )
