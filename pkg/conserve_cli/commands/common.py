"""Argument handling shared by the analysis commands."""

import logging

from conserve_cli.business.report_logic import LabeledProfile
from conserve_cli.utils.game_file import GameFile, load_game_file, parse_profile
from conserve_cli.utils.settings import AnalysisSettings, settings_from_args

logger = logging.getLogger(__name__)


def load_inputs(args) -> tuple[GameFile, AnalysisSettings]:
    """Game file named by args.file and the settings for this invocation."""
    settings = settings_from_args(args)
    game_file = load_game_file(args.file)
    logger.info(
        f"Loaded '{game_file.title}': {game_file.game.num_players} players, "
        f"strategies {list(game_file.game.strategy_counts)}"
    )
    return game_file, settings


def requested_profiles(
    args, game_file: GameFile, settings: AnalysisSettings
) -> list[LabeledProfile]:
    """Profiles from --profile, else the ones listed in the file's metadata."""
    texts = getattr(args, "profile", None) or game_file.metadata.profiles
    return [
        LabeledProfile(text, parse_profile(text, game_file.game, settings.tolerance))
        for text in texts
    ]


def wants_json(args) -> bool:
    return bool(getattr(args, "json", False))
