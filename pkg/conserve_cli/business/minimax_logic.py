"""
Security levels and minimax values for the conserve CLI.

Every value here comes from a linear program solved by the in-package
simplex method.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from conserve_cli.business.game_model import (
    Game,
    MixedStrategy,
    StrategyProfile,
    contract_profile,
    expected_utility,
    is_zero_sum,
    player_matrix,
)
from conserve_cli.business.simplex import (
    ConstraintSense,
    LinearProgram,
    ObjectiveSense,
    simplex_solve,
)
from conserve_cli.business.transform_logic import TransformResult
from conserve_cli.utils.common_utils import (
    ContractViolationError,
    InvariantViolationError,
    SingularBasisError,
    SizeCapExceededError,
    magnitude_scale,
    snap_zero,
)
from conserve_cli.utils.settings import AnalysisSettings, get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MaximinResult:
    """Security level of one player and a strategy that guarantees it"""

    player: int
    value: float
    strategy: MixedStrategy
    iterations: int = 0


@dataclass(frozen=True, eq=False)
class SolveResult:
    """
    Lower value sup_p1 inf_p2 E{x1}; for 2-player games also the upper value
    inf_p2 sup_p1 E{x1}, player 2's minimax strategy and the duality gap.
    """

    lower_value: float
    maximin_strategy: MixedStrategy
    upper_value: Optional[float] = None
    minimax_strategy: Optional[MixedStrategy] = None
    duality_gap: Optional[float] = None
    iterations: int = 0

    @property
    def value(self) -> float:
        return self.lower_value

    def optimal_profile(self) -> Optional[StrategyProfile]:
        if self.minimax_strategy is None:
            return None
        return StrategyProfile((self.maximin_strategy, self.minimax_strategy))


@dataclass(frozen=True, eq=False)
class ValueIdentityRow:
    """E{x_i}, E{x0} and E{x~_i} under one profile"""

    profile: StrategyProfile
    e_original: tuple[float, ...]
    e_passive: float
    e_transformed: tuple[float, ...]
    max_identity_error: float
    label: str = ""
    original_regret: Optional[float] = None
    transformed_regret: Optional[float] = None


def strategy_guarantee(game: Game, player: int, strategy: MixedStrategy) -> float:
    """Worst expected payoff of a strategy over all opponent pure profiles."""
    matrix = player_matrix(game, player)
    if strategy.size != matrix.shape[0]:
        raise ContractViolationError(
            f"Strategy has {strategy.size} weights, player {player + 1} has "
            f"{matrix.shape[0]} strategies"
        )
    return float(np.min(strategy.weights @ matrix))


def _maximin_program(matrix: np.ndarray) -> LinearProgram:
    # variables (p_1..p_k, v): maximize v subject to p . column >= v for every
    # opponent pure profile and p on the simplex
    k, columns = matrix.shape
    objective = np.zeros(k + 1)
    objective[-1] = 1.0
    rows = np.hstack([matrix.T, -np.ones((columns, 1))])
    simplex_row = np.append(np.ones(k), 0.0)
    return LinearProgram(
        objective=objective,
        constraint_matrix=np.vstack([rows, simplex_row]),
        constraint_rhs=np.append(np.zeros(columns), 1.0),
        constraint_sense=(ConstraintSense.GE,) * columns + (ConstraintSense.EQ,),
        variable_bounds=((0.0, None),) * k + ((None, None),),
        sense=ObjectiveSense.MAXIMIZE,
    )


def _canonical_program(
    block: np.ndarray, floor: float, held: list[float], index: int
) -> LinearProgram:
    # maximize weight index with the earlier weights held at their maxima
    k, columns = block.shape
    objective = np.zeros(k)
    objective[index] = 1.0
    return LinearProgram(
        objective=objective,
        constraint_matrix=np.vstack([block.T, np.ones(k)]),
        constraint_rhs=np.append(np.full(columns, floor), 1.0),
        constraint_sense=(ConstraintSense.GE,) * columns + (ConstraintSense.EQ,),
        variable_bounds=tuple((max(0.0, w), None) for w in held)
        + ((0.0, None),) * (k - len(held)),
        sense=ObjectiveSense.MAXIMIZE,
    )


def _greatest_weights_on(
    matrix: np.ndarray,
    floor: float,
    support: tuple[int, ...],
    settings: AnalysisSettings,
) -> tuple[Optional[np.ndarray], int]:
    """
    Lexicographically greatest strategy on the given rows that guarantees
    floor, or None when no such strategy exists.
    """
    block = matrix[list(support)]
    held: list[float] = []
    weights = None
    iterations = 0
    # the last weight is fixed by the others
    for index in range(max(1, len(support) - 1)):
        program = _canonical_program(block, floor, held, index)
        solution = simplex_solve(program, settings)
        iterations += solution.iterations
        if not solution.is_optimal:
            break
        weights = solution.solution
        held.append(float(weights[index]))
    if weights is None:
        return None, iterations
    full = np.zeros(matrix.shape[0])
    full[list(support)] = weights
    return full, iterations


def canonical_strategy(
    matrix: np.ndarray, floor: float, settings: AnalysisSettings
) -> tuple[Optional[np.ndarray], int]:
    """
    Deterministic choice among strategies guaranteeing floor.

    Supports are tried by size, then in lexicographic order; the first one
    that carries an optimal strategy wins, and within it the weights are
    lexicographically greatest. Players with more than max_support_size
    strategies skip the support search and take the lexicographically
    greatest weights over all strategies.

    Returns:
        (weights, simplex pivots spent); weights is None if every LP failed
    """
    k = matrix.shape[0]
    everything = tuple(range(k))
    if k > settings.max_support_size:
        return _greatest_weights_on(matrix, floor, everything, settings)

    slack = settings.feasibility_tolerance * magnitude_scale(matrix)
    for index in everything:
        if np.min(matrix[index]) >= floor - slack:
            weights = np.zeros(k)
            weights[index] = 1.0
            return weights, 0

    iterations = 0
    for size in range(2, k + 1):
        for support in itertools.combinations(everything, size):
            weights, pivots = _greatest_weights_on(matrix, floor, support, settings)
            iterations += pivots
            if weights is not None:
                return weights, iterations
    return None, iterations


def maximin(
    game: Game, player: int, settings: Optional[AnalysisSettings] = None
) -> MaximinResult:
    """
    Security level of a player: max over own mixed strategies of the minimum
    expected payoff over opponent behaviour.

    Only opponent pure profiles need to be constrained. For a fixed own
    strategy the expected payoff is multilinear in the opponents' weights, so
    over the product of their simplices it is minimized at a vertex, and the
    vertices of a product of simplices are exactly the pure profiles. This
    holds for any number of players.

    Raises:
        SizeCapExceededError: when the opponents have more than
            max_lp_outcomes pure profiles
        SingularBasisError: when the LP cannot be solved reliably
    """
    settings = settings or get_settings()
    matrix = player_matrix(game, player)
    if matrix.shape[1] > settings.max_lp_outcomes:
        raise SizeCapExceededError(
            "max_lp_outcomes", settings.max_lp_outcomes, matrix.shape[1]
        )

    solution = simplex_solve(_maximin_program(matrix), settings)
    if not solution.is_optimal:
        raise SingularBasisError(
            f"Maximin LP for player {player + 1} ended {solution.status.value}"
        )
    value = float(solution.optimal_value)
    weights = solution.solution[:-1]
    iterations = solution.iterations

    if settings.canonical_strategies and matrix.shape[0] > 1:
        refined, pivots = canonical_strategy(matrix, value, settings)
        iterations += pivots
        if refined is not None:
            weights = refined

    strategy = MixedStrategy.from_solution(weights)
    logger.debug(
        f"Maximin of player {player + 1}: value {value}, "
        f"strategy {strategy.weights.tolist()}"
    )
    return MaximinResult(
        player=player,
        value=snap_zero(value, settings.snap_tolerance),
        strategy=strategy,
        iterations=iterations,
    )


def security_levels(
    game: Game, settings: Optional[AnalysisSettings] = None
) -> list[MaximinResult]:
    """Maximin result of every player, in player order."""
    return [maximin(game, player, settings) for player in range(game.num_players)]


def minimax_bounds_2p(
    game: Game, settings: Optional[AnalysisSettings] = None
) -> SolveResult:
    """
    Lower and upper value of player 1's payoff in a 2-player game.

    The upper value inf_p2 sup_p1 E{x1} is player 2's maximin on -x1, so no
    zero-sum assumption is needed; lower <= upper always holds.
    """
    settings = settings or get_settings()
    if game.num_players != 2:
        raise ContractViolationError(
            f"Minimax bounds need a 2-player game, got {game.num_players} players"
        )
    lower = maximin(game, 0, settings)
    opposed = game.with_payoffs([game.payoffs[0], -game.payoffs[0]])
    upper = maximin(opposed, 1, settings)
    upper_value = snap_zero(-upper.value, settings.snap_tolerance)
    gap = upper_value - lower.value

    if gap < -settings.duality_gap_tolerance * magnitude_scale(game.payoffs[0]):
        raise InvariantViolationError(
            f"Lower value {lower.value} exceeds upper value {upper_value}"
        )
    return SolveResult(
        lower_value=lower.value,
        maximin_strategy=lower.strategy,
        upper_value=upper_value,
        minimax_strategy=upper.strategy,
        duality_gap=snap_zero(gap, settings.snap_tolerance),
        iterations=lower.iterations + upper.iterations,
    )


def solve_zero_sum_2p(
    game: Game, settings: Optional[AnalysisSettings] = None
) -> SolveResult:
    """
    Solve a 2-player zero-sum game and check that both values agree.

    Raises:
        ContractViolationError: when the game is not 2-player zero-sum
        InvariantViolationError: when the duality gap exceeds its tolerance
    """
    settings = settings or get_settings()
    if game.num_players != 2:
        raise ContractViolationError(
            f"Expected a 2-player game, got {game.num_players} players"
        )
    scale = magnitude_scale(*game.payoffs)
    if not is_zero_sum(game, settings.tolerance * scale):
        raise ContractViolationError(
            "Game is not zero-sum; transform it first "
            "(`conserve transform`) and solve the transformed game"
        )

    result = minimax_bounds_2p(game, settings)
    if abs(result.duality_gap) > settings.duality_gap_tolerance * scale:
        raise InvariantViolationError(
            f"Duality gap {result.duality_gap:.3e} above "
            f"{settings.duality_gap_tolerance * scale:.1e} on a zero-sum game"
        )
    logger.info(
        f"Zero-sum game value {result.lower_value} "
        f"(gap {result.duality_gap:.2e}, {result.iterations} pivots)"
    )
    return result


def value_identity_report(
    original: Game,
    result: TransformResult,
    profile: StrategyProfile,
    settings: Optional[AnalysisSettings] = None,
    label: str = "",
) -> ValueIdentityRow:
    """
    Expected payoffs before and after the transform under one profile.

    E{x~_i} = E{x_i} + E{x0} must hold for every player.
    """
    settings = settings or get_settings()
    profile.validate_for(original)
    e_original = tuple(
        expected_utility(original, player, profile)
        for player in range(original.num_players)
    )
    e_passive = contract_profile(result.passive_payoff, profile)
    e_transformed = tuple(
        expected_utility(result.transformed_game, player, profile)
        for player in range(original.num_players)
    )
    error = max(
        abs(t - (o + e_passive)) for o, t in zip(e_original, e_transformed)
    )
    if error > settings.closure_tolerance * magnitude_scale(*original.payoffs):
        raise InvariantViolationError(
            f"Value identity fails by {error:.3e} for profile "
            f"{profile.as_tuples()}"
        )
    return ValueIdentityRow(
        profile=profile,
        e_original=e_original,
        e_passive=e_passive,
        e_transformed=e_transformed,
        max_identity_error=error,
        label=label,
    )
