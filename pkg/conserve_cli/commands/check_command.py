"""Conservation audit command."""

from conserve_cli.business.game_model import is_constant_sum, is_zero_sum
from conserve_cli.commands.common import load_inputs, wants_json
from conserve_cli.utils.display import display_panel, print_json_document
from conserve_cli.utils.formatting import audit_lines, audit_to_dict


def check_command(args):
    game_file, settings = load_inputs(args)
    game = game_file.game

    zero_sum = is_zero_sum(game, settings.tolerance)
    conservation = is_constant_sum(game, settings.tolerance)

    if wants_json(args):
        print_json_document(
            {
                "title": game_file.title,
                "players": game.num_players,
                "strategies": list(game.strategy_counts),
                "audit": audit_to_dict(zero_sum, conservation),
            }
        )
        return

    border = "green" if conservation.holds else "yellow"
    display_panel(
        f"Conservation Audit: {game_file.title}",
        audit_lines(zero_sum, conservation),
        border_style=border,
    )
