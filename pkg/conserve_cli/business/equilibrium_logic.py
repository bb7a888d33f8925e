"""
Nash equilibrium enumeration for the conserve CLI - pure equilibria for any
number of players, mixed equilibria of 2-player games by support enumeration.
"""

import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Optional

import numpy as np

from conserve_cli.business.game_model import (
    Game,
    MixedStrategy,
    StrategyProfile,
    deviation_payoffs,
    expected_utility,
    player_matrix,
)
from conserve_cli.constants import SNAP_TOLERANCE, EquilibriumMethod
from conserve_cli.utils.common_utils import (
    ConserveError,
    ContractViolationError,
    SizeCapExceededError,
    magnitude_scale,
)
from conserve_cli.utils.settings import AnalysisSettings, get_settings

logger = logging.getLogger(__name__)


class SingularSystemError(ConserveError, ArithmeticError):
    """Raised when an indifference system has no unique solution"""

    pass


@dataclass(frozen=True, eq=False)
class EquilibriumEntry:
    profile: StrategyProfile
    payoffs: tuple[float, ...]
    max_regret: float


@dataclass(frozen=True, eq=False)
class EquilibriumSet:
    """Equilibria sorted lexicographically by profile"""

    entries: tuple[EquilibriumEntry, ...]
    method: EquilibriumMethod
    degenerate: bool = False
    skipped_supports: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[EquilibriumEntry]:
        return iter(self.entries)

    def profiles(self) -> list[StrategyProfile]:
        return [entry.profile for entry in self.entries]


def best_response_value(
    game: Game, player: int, profile: StrategyProfile
) -> tuple[float, int]:
    """
    Best payoff a player can reach by a pure strategy while the others keep
    their strategies, and the smallest index reaching it.
    """
    payoffs = deviation_payoffs(game, player, profile)
    best = float(np.max(payoffs))
    index = int(np.flatnonzero(payoffs >= best - SNAP_TOLERANCE)[0])
    return best, index


def profile_regrets(game: Game, profile: StrategyProfile) -> np.ndarray:
    """Per-player gain from the best unilateral deviation (never negative)."""
    regrets = []
    for player in range(game.num_players):
        payoffs = deviation_payoffs(game, player, profile)
        current = float(profile.strategies[player].weights @ payoffs)
        regrets.append(max(0.0, float(np.max(payoffs)) - current))
    return np.array(regrets)


def max_regret(game: Game, profile: StrategyProfile) -> float:
    return float(np.max(profile_regrets(game, profile)))


def _entry(game: Game, profile: StrategyProfile) -> EquilibriumEntry:
    return EquilibriumEntry(
        profile=profile,
        payoffs=tuple(
            expected_utility(game, player, profile)
            for player in range(game.num_players)
        ),
        max_regret=max_regret(game, profile),
    )


def pure_nash(game: Game, tol: Optional[float] = None) -> EquilibriumSet:
    """
    Every joint pure outcome from which no player gains more than tol by a
    unilateral pure deviation, in lexicographic order.
    """
    tol = get_settings().tolerance if tol is None else tol
    stable = np.ones(game.strategy_counts, dtype=bool)
    for player, payoff in enumerate(game.payoffs):
        best = np.max(payoff, axis=player, keepdims=True)
        stable &= payoff >= best - tol

    entries = tuple(
        _entry(game, StrategyProfile.pure(game, tuple(int(i) for i in outcome)))
        for outcome in np.argwhere(stable)
    )
    logger.debug(f"Pure scan found {len(entries)} equilibria")
    return EquilibriumSet(entries=entries, method=EquilibriumMethod.PURE_SCAN)


def solve_dense(matrix: np.ndarray, rhs: np.ndarray, singular_tol: float) -> np.ndarray:
    """Gaussian elimination with partial pivoting."""
    a = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    n = a.shape[0]
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[pivot, col]) < singular_tol:
            raise SingularSystemError(f"Pivot {a[pivot, col]:.3e} in column {col}")
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            b[[col, pivot]] = b[[pivot, col]]
        factors = a[col + 1 :, col] / a[col, col]
        a[col + 1 :] -= np.outer(factors, a[col])
        b[col + 1 :] -= factors * b[col]

    x = np.zeros(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1 :] @ x[row + 1 :]) / a[row, row]
    return x


def _indifference_weights(block: np.ndarray, singular_tol: float) -> np.ndarray:
    """
    Weights w over the block's rows that make the opponent indifferent
    between the block's columns:

        sum_i w_i block[i, j] - u = 0   for every column j
        sum_i w_i                 = 1
    """
    k = block.shape[0]
    system = np.zeros((k + 1, k + 1))
    system[:k, :k] = block.T
    system[:k, k] = -1.0
    system[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    return solve_dense(system, rhs, singular_tol)[:k]


def _spread(weights: np.ndarray, support: tuple[int, ...], size: int) -> MixedStrategy:
    full = np.zeros(size)
    full[list(support)] = np.clip(weights, 0.0, None)
    return MixedStrategy.from_solution(full)


def _is_degenerate(game: Game, profile: StrategyProfile, tol: float) -> bool:
    # in a nondegenerate game no mixed strategy has more pure best responses
    # than its support size
    for player in range(2):
        opponent = profile.strategies[1 - player]
        payoffs = deviation_payoffs(game, player, profile)
        responses = int(np.sum(payoffs >= np.max(payoffs) - tol))
        if responses > len(opponent.support):
            return True
    return False


def support_enumeration_2p(
    game: Game, settings: Optional[AnalysisSettings] = None
) -> EquilibriumSet:
    """
    All equilibria of a nondegenerate 2-player game (representative vertices
    of a degenerate one) by solving the indifference conditions of every pair
    of equal-size supports.

    Raises:
        ContractViolationError: for games that are not 2-player
        SizeCapExceededError: when a player has more than max_support_size
            strategies
    """
    settings = settings or get_settings()
    if game.num_players != 2:
        raise ContractViolationError(
            f"Support enumeration needs a 2-player game, got {game.num_players}"
        )
    rows, cols = game.strategy_counts
    largest = max(rows, cols)
    if largest > settings.max_support_size:
        raise SizeCapExceededError(
            "max_support_size", settings.max_support_size, largest
        )

    a, b = game.payoffs
    regret_limit = settings.regret_tolerance * magnitude_scale(a, b)
    found: list[EquilibriumEntry] = []
    skipped = 0
    degenerate = False
    for size in range(1, min(rows, cols) + 1):
        for row_support, col_support in itertools.product(
            itertools.combinations(range(rows), size),
            itertools.combinations(range(cols), size),
        ):
            block = np.ix_(row_support, col_support)
            try:
                x = _indifference_weights(b[block], settings.singular_tolerance)
                y = _indifference_weights(a[block].T, settings.singular_tolerance)
            except SingularSystemError as e:
                logger.debug(f"Supports {row_support}/{col_support} skipped: {e}")
                skipped += 1
                continue
            if np.any(x < -settings.tolerance) or np.any(y < -settings.tolerance):
                continue

            profile = StrategyProfile(
                (_spread(x, row_support, rows), _spread(y, col_support, cols))
            )
            entry = _entry(game, profile)
            if entry.max_regret > regret_limit:
                continue
            if any(
                _distance(entry.profile, other.profile) < settings.dedup_tolerance
                for other in found
            ):
                continue
            degenerate = degenerate or _is_degenerate(game, profile, regret_limit)
            found.append(entry)

    if degenerate:
        logger.warning(
            "Game is degenerate; equilibria listed are representative vertices"
        )
    entries = tuple(sorted(found, key=lambda e: e.profile.sort_key()))
    logger.debug(
        f"Support enumeration found {len(entries)} equilibria, "
        f"{skipped} singular support pairs"
    )
    return EquilibriumSet(
        entries=entries,
        method=EquilibriumMethod.SUPPORT_ENUMERATION,
        degenerate=degenerate,
        skipped_supports=skipped,
    )


def _distance(first: StrategyProfile, second: StrategyProfile) -> float:
    return max(
        float(np.max(np.abs(s.weights - t.weights)))
        for s, t in zip(first.strategies, second.strategies)
    )


def equilibrium_sets_differ(
    first: EquilibriumSet, second: EquilibriumSet, tol: float = 1e-6
) -> bool:
    """True when some equilibrium of one set has no match in the other."""

    def covered(source: EquilibriumSet, target: EquilibriumSet) -> bool:
        return all(
            any(_distance(e.profile, f.profile) < tol for f in target)
            for e in source
        )

    return not (covered(first, second) and covered(second, first))


def strictly_dominated_strategies(
    game: Game, player: int, tol: Optional[float] = None
) -> list[tuple[int, int]]:
    """
    Pairs (dominated, dominating) of pure strategies where the second pays
    strictly more (by more than tol) against every opponent pure profile.
    """
    tol = get_settings().tolerance if tol is None else tol
    matrix = player_matrix(game, player)
    pairs = []
    for dominated, dominating in itertools.permutations(range(matrix.shape[0]), 2):
        if np.all(matrix[dominating] > matrix[dominated] + tol):
            pairs.append((dominated, dominating))
    return sorted(pairs)
