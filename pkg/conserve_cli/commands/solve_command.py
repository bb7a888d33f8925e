"""Security level and minimax command."""

import logging

from conserve_cli.business.game_model import is_zero_sum
from conserve_cli.business.minimax_logic import (
    minimax_bounds_2p,
    security_levels,
    solve_zero_sum_2p,
)
from conserve_cli.business.transform_logic import transform_game
from conserve_cli.commands.common import load_inputs, wants_json
from conserve_cli.utils.display import (
    display_panel,
    display_table,
    print_info,
    print_json_document,
)
from conserve_cli.utils.formatting import (
    security_rows,
    security_to_dict,
    solve_lines,
    solve_to_dict,
)

logger = logging.getLogger(__name__)

SECURITY_COLUMNS = [
    ("Player", "cyan"),
    ("Security level", "green"),
    ("Maximin strategy", "white"),
]


def solve_command(args):
    game_file, settings = load_inputs(args)
    game = game_file.game
    transformed = transform_game(game, settings).transformed_game

    original_security = security_levels(game, settings)
    transformed_security = security_levels(transformed, settings)

    original_bounds = None
    transformed_solution = None
    if game.num_players == 2:
        original_bounds = minimax_bounds_2p(game, settings)
        transformed_solution = solve_zero_sum_2p(transformed, settings)

    if wants_json(args):
        print_json_document(
            {
                "title": game_file.title,
                "original_zero_sum": is_zero_sum(game, settings.tolerance),
                "original_security_levels": security_to_dict(original_security, game),
                "transformed_security_levels": security_to_dict(
                    transformed_security, transformed
                ),
                "original_bounds": (
                    None if original_bounds is None else solve_to_dict(original_bounds)
                ),
                "transformed_solution": (
                    None
                    if transformed_solution is None
                    else solve_to_dict(transformed_solution)
                ),
            }
        )
        return

    display_table(
        f"Original Security Levels: {game_file.title}",
        SECURITY_COLUMNS,
        security_rows(original_security, game),
    )
    display_table(
        "Transformed Security Levels",
        SECURITY_COLUMNS,
        security_rows(transformed_security, transformed),
    )
    if original_bounds is not None:
        display_panel(
            "Original Game: Lower and Upper Value of Player 1",
            solve_lines(original_bounds),
        )
    if transformed_solution is not None:
        display_panel(
            "Transformed Zero-Sum Game",
            solve_lines(transformed_solution),
            border_style="green",
        )
    else:
        print_info(
            "Upper values are only computed for 2-player games; "
            "security levels are shown instead"
        )
