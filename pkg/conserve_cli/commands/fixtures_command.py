"""List the bundled game fixtures."""

from conserve_cli.commands.common import wants_json
from conserve_cli.utils.display import display_table, print_json_document
from conserve_cli.utils.game_file import list_fixtures, load_game_file


def fixtures_command(args):
    entries = []
    for name in list_fixtures():
        game_file = load_game_file(name)
        entries.append(
            {
                "name": name,
                "title": game_file.title,
                "players": game_file.game.num_players,
                "strategies": list(game_file.game.strategy_counts),
            }
        )

    if wants_json(args):
        print_json_document(entries)
        return

    display_table(
        "Bundled Fixtures",
        [("Name", "cyan"), ("Title", "white"), ("Strategies", "green")],
        [
            [entry["name"], entry["title"], " x ".join(map(str, entry["strategies"]))]
            for entry in entries
        ],
    )
