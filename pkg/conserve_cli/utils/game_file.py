"""
Game file reading and writing for the conserve CLI.

A game file is a UTF-8 JSON document with the fields `players`,
`strategies`, `names`, `payoffs` and `metadata`. Each payoff array is the
row-major flattening of one player's tensor (player 1 index slowest).
"""

import json
import logging
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from conserve_cli.business.game_model import Game, MixedStrategy, StrategyProfile
from conserve_cli.constants import DEFAULT_TOLERANCE, DiagnosticCode
from conserve_cli.utils.common_utils import GameFileError, ShapeError, clean_number

logger = logging.getLogger(__name__)

FIXTURE_PACKAGE = "conserve_cli.fixtures"


class GameNames(BaseModel):
    model_config = ConfigDict(extra="forbid")

    players: Optional[list[str]] = None
    strategies: Optional[list[list[str]]] = None


class GameMetadata(BaseModel):
    model_config = ConfigDict(extra="allow")

    title: Optional[str] = None
    source: Optional[str] = None
    profiles: list[str] = []


class GameDocument(BaseModel):
    """Schema of a game file; cross-field checks happen in parse_game_document"""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    players: int
    strategies: list[int]
    names: Optional[GameNames] = None
    payoffs: list[list[float]]
    metadata: Optional[GameMetadata] = None


@dataclass(frozen=True)
class GameFile:
    game: Game
    metadata: GameMetadata = field(default_factory=GameMetadata)

    @property
    def title(self) -> str:
        return self.metadata.title or "Untitled game"


def _field_line(document: str, field_name: str) -> Optional[int]:
    match = re.search(rf'"{re.escape(field_name)}"\s*:', document)
    if not match:
        return None
    return document.count("\n", 0, match.start()) + 1


def _non_finite(document: str, text: str) -> GameFileError:
    index = document.find(text)
    line = document.count("\n", 0, index) + 1 if index >= 0 else None
    return GameFileError(
        DiagnosticCode.NON_FINITE, f"{text} is not a finite number", line=line
    )


def _finite_float(document: str, text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise _non_finite(document, text)
    return value


def _reject_constant(document: str, text: str) -> float:
    raise _non_finite(document, text)


_ERROR_CODES = {
    "missing": DiagnosticCode.MISSING_FIELD,
    "finite_number": DiagnosticCode.NON_FINITE,
    "extra_forbidden": DiagnosticCode.UNKNOWN_FIELD,
}


def _diagnostic_from_validation(document: str, error: ValidationError) -> GameFileError:
    first = error.errors()[0]
    loc = [str(part) for part in first["loc"]]
    code = _ERROR_CODES.get(first["type"], DiagnosticCode.INVALID_VALUE)
    field_path = loc[0] + "".join(f"[{part}]" for part in loc[1:]) if loc else None
    line = _field_line(document, loc[0]) if loc else None
    return GameFileError(code, first["msg"], field=field_path, line=line)


def parse_game_document(document: str) -> GameFile:
    """
    Parse and validate a game file.

    Raises:
        GameFileError: with a diagnostic code and the field/line location
    """
    if not document or not document.strip():
        raise GameFileError(DiagnosticCode.EMPTY_DOCUMENT, "document is empty")

    try:
        raw = json.loads(
            document,
            parse_float=lambda text: _finite_float(document, text),
            parse_constant=lambda text: _reject_constant(document, text),
        )
    except json.JSONDecodeError as e:
        raise GameFileError(DiagnosticCode.SYNTAX, e.msg, line=e.lineno) from e
    if not isinstance(raw, dict):
        raise GameFileError(DiagnosticCode.SYNTAX, "top level must be an object")

    try:
        parsed = GameDocument.model_validate(raw)
    except ValidationError as e:
        raise _diagnostic_from_validation(document, e) from e

    if parsed.players < 1:
        raise GameFileError(
            DiagnosticCode.INVALID_VALUE,
            "at least one player is required",
            field="players",
            line=_field_line(document, "players"),
        )
    if len(parsed.strategies) != parsed.players:
        raise GameFileError(
            DiagnosticCode.PLAYER_COUNT_MISMATCH,
            f"{len(parsed.strategies)} strategy counts for {parsed.players} players",
            field="strategies",
            line=_field_line(document, "strategies"),
        )
    for index, count in enumerate(parsed.strategies):
        if count < 1:
            raise GameFileError(
                DiagnosticCode.INVALID_VALUE,
                f"strategy count {count} must be >= 1",
                field=f"strategies[{index}]",
                line=_field_line(document, "strategies"),
            )
    if len(parsed.payoffs) != parsed.players:
        raise GameFileError(
            DiagnosticCode.PLAYER_COUNT_MISMATCH,
            f"{len(parsed.payoffs)} payoff arrays for {parsed.players} players",
            field="payoffs",
            line=_field_line(document, "payoffs"),
        )

    counts = tuple(parsed.strategies)
    expected = int(np.prod(counts))
    for index, values in enumerate(parsed.payoffs):
        if len(values) != expected:
            raise GameFileError(
                DiagnosticCode.LENGTH_MISMATCH,
                f"{len(values)} payoffs given, strategies {list(counts)} "
                f"need {expected}",
                field=f"payoffs[{index}]",
                line=_field_line(document, "payoffs"),
            )

    names = parsed.names or GameNames()
    try:
        game = Game(
            payoffs=tuple(np.array(v).reshape(counts) for v in parsed.payoffs),
            player_names=tuple(names.players) if names.players else None,
            strategy_names=(
                tuple(tuple(s) for s in names.strategies) if names.strategies else None
            ),
        )
    except ShapeError as e:
        raise GameFileError(
            DiagnosticCode.INVALID_VALUE,
            str(e),
            field="names",
            line=_field_line(document, "names"),
        ) from e

    logger.debug(f"Parsed {game.num_players}-player game {list(counts)}")
    return GameFile(game=game, metadata=parsed.metadata or GameMetadata())


def parse_game(document: str) -> Game:
    return parse_game_document(document).game


def game_to_dict(game: Game, metadata: Optional[GameMetadata] = None) -> dict[str, Any]:
    data: dict[str, Any] = {
        "players": game.num_players,
        "strategies": list(game.strategy_counts),
    }
    if game.player_names or game.strategy_names:
        names: dict[str, Any] = {}
        if game.player_names:
            names["players"] = list(game.player_names)
        if game.strategy_names:
            names["strategies"] = [list(s) for s in game.strategy_names]
        data["names"] = names
    data["payoffs"] = [
        [clean_number(v) for v in payoff.reshape(-1).tolist()]
        for payoff in game.payoffs
    ]
    if metadata is not None:
        data["metadata"] = metadata.model_dump(exclude_none=True, exclude_defaults=True)
    return data


def emit_game(game: Game, metadata: Optional[GameMetadata] = None) -> str:
    """Game file text: 12 significant digits, -0 written as 0."""
    return json.dumps(game_to_dict(game, metadata), indent=2) + "\n"


def parse_profile(
    text: str, game: Game, tol: float = DEFAULT_TOLERANCE
) -> StrategyProfile:
    """
    Parse a profile given as comma-separated probabilities per player,
    players separated by colons, e.g. ".5,.5:1,0".

    Raises:
        GameFileError: INVALID_PROFILE when the text does not fit the game
    """
    parts = text.strip().split(":")
    if len(parts) != game.num_players:
        raise GameFileError(
            DiagnosticCode.INVALID_PROFILE,
            f"profile '{text}' has {len(parts)} players, game has {game.num_players}",
            field="profile",
        )
    strategies = []
    for player, (part, count) in enumerate(zip(parts, game.strategy_counts)):
        try:
            weights = np.array([float(w) for w in part.split(",")])
        except ValueError as e:
            raise GameFileError(
                DiagnosticCode.INVALID_PROFILE,
                f"player {player + 1} weights '{part}' are not numbers",
                field="profile",
            ) from e
        if weights.size != count:
            raise GameFileError(
                DiagnosticCode.INVALID_PROFILE,
                f"player {player + 1} has {count} strategies, got {weights.size} weights",
                field="profile",
            )
        if not np.all(np.isfinite(weights)) or np.any(weights < -tol):
            raise GameFileError(
                DiagnosticCode.INVALID_PROFILE,
                f"player {player + 1} weights must be non-negative numbers",
                field="profile",
            )
        total = float(np.sum(weights))
        if abs(total - 1.0) > tol:
            raise GameFileError(
                DiagnosticCode.INVALID_PROFILE,
                f"player {player + 1} weights sum to {total}, expected 1",
                field="profile",
            )
        strategies.append(MixedStrategy.from_solution(weights))
    return StrategyProfile(tuple(strategies))


def format_profile(profile: StrategyProfile) -> str:
    """Inverse of parse_profile."""
    return ":".join(
        ",".join(str(clean_number(w)) for w in strategy.weights)
        for strategy in profile.strategies
    )


def list_fixtures() -> list[str]:
    return sorted(
        Path(entry.name).stem
        for entry in resources.files(FIXTURE_PACKAGE).iterdir()
        if entry.name.endswith(".json")
    )


def read_fixture(name: str) -> str:
    return resources.files(FIXTURE_PACKAGE).joinpath(f"{name}.json").read_text(
        encoding="utf-8"
    )


def load_game_file(source: str) -> GameFile:
    """
    Load a game from a path, or from a bundled fixture when no file of that
    name exists.

    Raises:
        GameFileError: when neither a file nor a fixture matches
    """
    path = Path(source)
    if path.is_file():
        return parse_game_document(path.read_text(encoding="utf-8"))
    if source in list_fixtures():
        logger.debug(f"Loading bundled fixture {source}")
        return parse_game_document(read_fixture(source))
    raise GameFileError(
        DiagnosticCode.FILE_NOT_FOUND,
        f"no game file or bundled fixture named '{source}' "
        f"(fixtures: {', '.join(list_fixtures())})",
        field="file",
    )
