"""Expected utility command: value identity rows for given profiles."""

from dataclasses import replace

from conserve_cli.business.equilibrium_logic import max_regret
from conserve_cli.business.minimax_logic import value_identity_report
from conserve_cli.business.transform_logic import transform_game
from conserve_cli.commands.common import load_inputs, requested_profiles, wants_json
from conserve_cli.constants import DiagnosticCode
from conserve_cli.utils.common_utils import GameFileError
from conserve_cli.utils.display import display_table, print_json_document
from conserve_cli.utils.formatting import value_identity_rows, value_identity_to_dict

VALUE_IDENTITY_COLUMNS = [
    ("Label", "dim"),
    ("Profile", "cyan"),
    ("E{x_i}", "white"),
    ("E{x0}", "yellow"),
    ("E{x~_i}", "green"),
    ("Regret", "magenta"),
    ("Regret (transformed)", "magenta"),
]


def eu_command(args):
    game_file, settings = load_inputs(args)
    game = game_file.game
    profiles = requested_profiles(args, game_file, settings)
    if not profiles:
        raise GameFileError(
            DiagnosticCode.INVALID_PROFILE,
            "no --profile given and the game file lists no metadata.profiles",
            field="profile",
        )

    result = transform_game(game, settings)
    rows = []
    for item in profiles:
        row = value_identity_report(
            game, result, item.profile, settings, label=item.label
        )
        rows.append(
            replace(
                row,
                original_regret=max_regret(game, item.profile),
                transformed_regret=max_regret(result.transformed_game, item.profile),
            )
        )

    if wants_json(args):
        print_json_document(
            {
                "title": game_file.title,
                "value_identity": [value_identity_to_dict(row) for row in rows],
            }
        )
        return

    display_table(
        f"Expected Utilities: {game_file.title}",
        VALUE_IDENTITY_COLUMNS,
        value_identity_rows(rows),
    )
