"""
Passive player transform for the conserve CLI.

x0 = -(1/m) * sum_i x_i is added to every player's payoff, which makes the
active players' payoffs sum to zero at every outcome. The passive player,
with a single strategy, receives m * x0.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from conserve_cli.business.game_model import Game, is_constant_sum, is_zero_sum
from conserve_cli.constants import PASSIVE_PLAYER_NAME, PASSIVE_STRATEGY_NAME
from conserve_cli.utils.common_utils import InvariantViolationError, magnitude_scale
from conserve_cli.utils.settings import AnalysisSettings, get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TransformResult:
    """Transformed game plus the facts recorded while building it"""

    passive_payoff: np.ndarray
    transformed_game: Game
    original_was_zero_sum: bool
    original_was_constant_sum: bool
    max_abs_residual: float
    original_constant: Optional[float] = None
    augmented_total_range: tuple[float, float] = (0.0, 0.0)

    @property
    def num_players(self) -> int:
        return self.transformed_game.num_players

    @property
    def passive_total(self) -> np.ndarray:
        """Payoff of the passive player, m * x0."""
        return self.num_players * self.passive_payoff

    @property
    def shift_is_constant(self) -> bool:
        """x0 is a constant function: the conservation-law case."""
        return self.original_was_constant_sum


def compute_passive_payoff(game: Game) -> np.ndarray:
    """x0 at every outcome: minus the mean of the players' payoffs."""
    passive = -game.total_payoff() / game.num_players
    passive.setflags(write=False)
    return passive


def transform_game(
    game: Game, settings: Optional[AnalysisSettings] = None
) -> TransformResult:
    """
    Apply T(x) = x + x0 to every player.

    Raises:
        InvariantViolationError: if the transformed payoffs do not sum to zero
            within the closure tolerance, scaled by the largest payoff magnitude
    """
    settings = settings or get_settings()
    passive = compute_passive_payoff(game)
    transformed = game.with_payoffs([payoff + passive for payoff in game.payoffs])

    residual = float(np.max(np.abs(transformed.total_payoff())))
    limit = settings.closure_tolerance * magnitude_scale(*game.payoffs)
    if residual > limit:
        raise InvariantViolationError(
            f"Transformed payoffs sum to {residual:.3e} at some outcome, "
            f"above closure tolerance {limit:.1e}"
        )

    conservation = is_constant_sum(game, settings.tolerance)
    passive_total = game.num_players * passive
    result = TransformResult(
        passive_payoff=passive,
        transformed_game=transformed,
        original_was_zero_sum=is_zero_sum(game, settings.tolerance),
        original_was_constant_sum=conservation.holds,
        max_abs_residual=residual,
        original_constant=conservation.constant,
        augmented_total_range=(
            float(np.min(passive_total)),
            float(np.max(passive_total)),
        ),
    )
    logger.debug(
        f"Transformed {game.num_players}-player game "
        f"{list(game.strategy_counts)}: residual {residual:.3e}, "
        f"zero-sum={result.original_was_zero_sum}, "
        f"constant-sum={result.original_was_constant_sum}"
    )
    return result


def augment_with_passive_player(
    game: Game, settings: Optional[AnalysisSettings] = None
) -> Game:
    """
    Build the (m+1)-player game with the passive player at index 0.

    The passive player has one strategy and payoff m * x0; players 1..m get
    the transformed payoffs. The (m+1)-player total is m * x0, which is
    constant only when the original game is constant-sum.
    """
    result = transform_game(game, settings)
    return augmented_game(result)


def augmented_game(result: TransformResult) -> Game:
    """Augmented game view of an existing transform result."""
    base = result.transformed_game
    counts = (1,) + base.strategy_counts
    payoffs = [result.passive_total.reshape(counts)]
    payoffs.extend(payoff.reshape(counts) for payoff in base.payoffs)

    player_names = None
    strategy_names = None
    if base.player_names:
        player_names = (PASSIVE_PLAYER_NAME,) + base.player_names
    if base.strategy_names:
        strategy_names = ((PASSIVE_STRATEGY_NAME,),) + base.strategy_names
    return Game(
        payoffs=tuple(payoffs),
        player_names=player_names,
        strategy_names=strategy_names,
    )


def restore_original(result: TransformResult) -> Game:
    """Invert T: x_i = x~_i - x0."""
    base = result.transformed_game
    return base.with_payoffs([p - result.passive_payoff for p in base.payoffs])


def passive_payoff_maximizers(
    result: TransformResult, tol: Optional[float] = None
) -> list[tuple[int, ...]]:
    """Joint outcomes, in lexicographic order, where x0 is maximal."""
    tol = get_settings().tolerance if tol is None else tol
    passive = result.passive_payoff
    best = np.max(passive)
    return [tuple(int(i) for i in idx) for idx in np.argwhere(passive >= best - tol)]
