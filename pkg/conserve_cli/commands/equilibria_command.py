"""Nash equilibrium command for the original and transformed games."""

import logging
from typing import Optional

from conserve_cli.business.equilibrium_logic import (
    EquilibriumSet,
    equilibrium_sets_differ,
    pure_nash,
    support_enumeration_2p,
)
from conserve_cli.business.game_model import Game
from conserve_cli.business.transform_logic import transform_game
from conserve_cli.commands.common import load_inputs, wants_json
from conserve_cli.utils.common_utils import SizeCapExceededError
from conserve_cli.utils.display import (
    display_panel,
    display_table,
    print_json_document,
    print_warning,
)
from conserve_cli.utils.formatting import (
    equilibria_to_dict,
    equilibrium_rows,
    equilibrium_title,
)
from conserve_cli.utils.settings import AnalysisSettings

logger = logging.getLogger(__name__)

EQUILIBRIUM_COLUMNS = [
    ("#", "dim"),
    ("Profile", "cyan"),
    ("Payoffs", "green"),
    ("Max regret", "magenta"),
]


def _equilibria(
    game: Game, settings: AnalysisSettings, notes: list[str], kind: str
) -> tuple[EquilibriumSet, Optional[EquilibriumSet]]:
    pure = pure_nash(game, settings.tolerance)
    if game.num_players != 2:
        notes.append(f"{kind}: support enumeration needs exactly 2 players")
        return pure, None
    try:
        return pure, support_enumeration_2p(game, settings)
    except SizeCapExceededError as e:
        notes.append(f"{kind}: support enumeration skipped, {e}")
        return pure, None


def _richest(found: dict, kind: str) -> EquilibriumSet:
    mixed = found[f"{kind}_mixed"]
    return found[f"{kind}_pure"] if mixed is None else mixed


def equilibria_command(args):
    game_file, settings = load_inputs(args)
    game = game_file.game
    transformed = transform_game(game, settings).transformed_game

    notes: list[str] = []
    found = {}
    for kind, target in (("original", game), ("transformed", transformed)):
        pure, mixed = _equilibria(target, settings, notes, kind)
        found[f"{kind}_pure"] = pure
        found[f"{kind}_mixed"] = mixed

    differ = equilibrium_sets_differ(
        _richest(found, "original"),
        _richest(found, "transformed"),
        settings.dedup_tolerance,
    )

    if wants_json(args):
        print_json_document(
            {
                "title": game_file.title,
                "equilibria": {
                    name: None if value is None else equilibria_to_dict(value, game)
                    for name, value in found.items()
                },
                "equilibria_differ": differ,
                "notes": notes,
            }
        )
        return

    for name, value in found.items():
        if value is None:
            continue
        kind, _ = name.split("_")
        title = equilibrium_title(f"{kind.capitalize()} game", value)
        if not value:
            display_panel(title, "No equilibria found", border_style="yellow")
            continue
        display_table(title, EQUILIBRIUM_COLUMNS, equilibrium_rows(value, game))

    for note in notes:
        print_warning(note)
    verdict = "differ" if differ else "coincide"
    display_panel(
        "Original vs Transformed",
        f"Equilibrium sets {verdict}",
        border_style="yellow" if differ else "green",
    )
