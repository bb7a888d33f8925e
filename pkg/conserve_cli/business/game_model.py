"""
Finite normal-form game model for the conserve CLI.

Payoffs are dense tensors laid out row-major in player order (player 1 index
slowest). Joint outcomes are always visited in lexicographic order.
"""

import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import Optional

import numpy as np

from conserve_cli.constants import DEFAULT_TOLERANCE, PROBABILITY_TOLERANCE
from conserve_cli.utils.common_utils import ShapeError, snap_zero

logger = logging.getLogger(__name__)


def _frozen_array(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Game:
    """
    An m-player finite game.

    payoffs[i] has shape strategy_counts and holds player i's payoff at every
    joint pure outcome. A strategy count of 1 encodes a passive player.
    """

    payoffs: tuple[np.ndarray, ...]
    player_names: Optional[tuple[str, ...]] = None
    strategy_names: Optional[tuple[tuple[str, ...], ...]] = None

    def __post_init__(self):
        tensors = tuple(_frozen_array(p) for p in self.payoffs)
        if not tensors:
            raise ShapeError("A game needs at least one player")

        shape = tensors[0].shape
        if len(shape) != len(tensors):
            raise ShapeError(
                f"Payoff tensors of a {len(tensors)}-player game must have "
                f"{len(tensors)} axes, got shape {shape}"
            )
        for index, tensor in enumerate(tensors):
            if tensor.shape != shape:
                raise ShapeError(
                    f"Payoff tensor of player {index + 1} has shape "
                    f"{tensor.shape}, expected {shape}"
                )
            if not np.all(np.isfinite(tensor)):
                raise ShapeError(f"Payoffs of player {index + 1} are not finite")
        if any(count < 1 for count in shape):
            raise ShapeError(f"Every strategy count must be >= 1, got {shape}")

        object.__setattr__(self, "payoffs", tensors)

        if self.player_names is not None:
            names = tuple(str(n) for n in self.player_names)
            if len(names) != len(tensors):
                raise ShapeError(
                    f"Expected {len(tensors)} player names, got {len(names)}"
                )
            object.__setattr__(self, "player_names", names)

        if self.strategy_names is not None:
            labels = tuple(tuple(str(s) for s in group) for group in self.strategy_names)
            if tuple(len(group) for group in labels) != shape:
                raise ShapeError(
                    f"Strategy names do not match strategy counts {list(shape)}"
                )
            object.__setattr__(self, "strategy_names", labels)

    @property
    def num_players(self) -> int:
        return len(self.payoffs)

    @property
    def strategy_counts(self) -> tuple[int, ...]:
        return tuple(self.payoffs[0].shape)

    @property
    def num_outcomes(self) -> int:
        return int(np.prod(self.strategy_counts))

    def player_label(self, player: int) -> str:
        if self.player_names:
            return self.player_names[player]
        return f"P{player + 1}"

    def strategy_label(self, player: int, strategy: int) -> str:
        if self.strategy_names:
            return self.strategy_names[player][strategy]
        return f"s{strategy}"

    def outcome_label(self, outcome: Sequence[int]) -> str:
        return "(" + ", ".join(
            self.strategy_label(player, s) for player, s in enumerate(outcome)
        ) + ")"

    def outcomes(self) -> Iterator[tuple[int, ...]]:
        """Joint pure outcomes in lexicographic order."""
        return itertools.product(*(range(count) for count in self.strategy_counts))

    def payoff_array(self) -> np.ndarray:
        """Payoffs stacked into one array of shape (m, *strategy_counts)."""
        return np.stack(self.payoffs)

    def total_payoff(self) -> np.ndarray:
        """The sum of all players' payoffs at every outcome."""
        return np.sum(self.payoff_array(), axis=0)

    def with_payoffs(self, payoffs: Sequence[np.ndarray]) -> "Game":
        """Same players and labels, new payoff tensors."""
        return Game(
            payoffs=tuple(payoffs),
            player_names=self.player_names,
            strategy_names=self.strategy_names,
        )

    def check_player(self, player: int) -> None:
        if not 0 <= player < self.num_players:
            raise ShapeError(
                f"Player index {player} out of range for a "
                f"{self.num_players}-player game"
            )


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """Probability vector over one player's pure strategies"""

    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        if weights.ndim != 1 or weights.size == 0:
            raise ShapeError("A mixed strategy needs a non-empty weight vector")
        if not np.all(np.isfinite(weights)):
            raise ShapeError("Mixed strategy weights must be finite")
        if np.any(weights < -PROBABILITY_TOLERANCE):
            raise ShapeError(f"Mixed strategy has negative weights: {weights.tolist()}")
        total = float(np.sum(weights))
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise ShapeError(f"Mixed strategy weights sum to {total}, expected 1")
        weights = np.clip(weights, 0.0, None)
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def pure(cls, index: int, count: int) -> "MixedStrategy":
        if not 0 <= index < count:
            raise ShapeError(f"Pure strategy {index} out of range 0..{count - 1}")
        weights = np.zeros(count)
        weights[index] = 1.0
        return cls(weights)

    @classmethod
    def uniform(cls, count: int) -> "MixedStrategy":
        return cls(np.full(count, 1.0 / count))

    @classmethod
    def from_solution(cls, values: Sequence[float]) -> "MixedStrategy":
        """Clip solver round-off and renormalize onto the simplex."""
        weights = np.clip(np.array(values, dtype=float), 0.0, None)
        return cls(weights / np.sum(weights))

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.weights > 0.0))

    @property
    def pure_index(self) -> Optional[int]:
        support = self.support
        if len(support) == 1:
            return support[0]
        return None


@dataclass(frozen=True, eq=False)
class StrategyProfile:
    """One mixed strategy per player, inducing the product distribution"""

    strategies: tuple[MixedStrategy, ...]

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))

    @classmethod
    def pure(cls, game: Game, outcome: Sequence[int]) -> "StrategyProfile":
        if len(outcome) != game.num_players:
            raise ShapeError(
                f"Pure profile has {len(outcome)} entries for "
                f"{game.num_players} players"
            )
        return cls(
            tuple(
                MixedStrategy.pure(index, count)
                for index, count in zip(outcome, game.strategy_counts)
            )
        )

    @classmethod
    def uniform(cls, game: Game) -> "StrategyProfile":
        return cls(tuple(MixedStrategy.uniform(c) for c in game.strategy_counts))

    def validate_for(self, game: Game) -> None:
        if len(self.strategies) != game.num_players:
            raise ShapeError(
                f"Profile has {len(self.strategies)} strategies for a "
                f"{game.num_players}-player game"
            )
        for player, (strategy, count) in enumerate(
            zip(self.strategies, game.strategy_counts)
        ):
            if strategy.size != count:
                raise ShapeError(
                    f"Strategy of player {player + 1} has {strategy.size} "
                    f"weights, the game has {count} strategies"
                )

    def replace(self, player: int, strategy: MixedStrategy) -> "StrategyProfile":
        strategies = list(self.strategies)
        strategies[player] = strategy
        return StrategyProfile(tuple(strategies))

    def outcome_distribution(self) -> np.ndarray:
        """Product measure p1 x ... x pm as a tensor over joint outcomes."""
        distribution = np.ones(())
        for strategy in self.strategies:
            distribution = np.multiply.outer(distribution, strategy.weights)
        return distribution

    def as_tuples(self) -> tuple[tuple[float, ...], ...]:
        return tuple(tuple(float(w) for w in s.weights) for s in self.strategies)

    def sort_key(self) -> tuple[float, ...]:
        """Lexicographic order that lists strategy-0-heavy profiles first."""
        return tuple(-float(w) for s in self.strategies for w in s.weights)


def contract_profile(tensor: np.ndarray, profile: StrategyProfile) -> float:
    """Sum of tensor(w) * prod_j p_j(w_j) over all joint outcomes w."""
    value = tensor
    for strategy in profile.strategies:
        value = np.tensordot(strategy.weights, value, axes=(0, 0))
    return float(value)


def expected_utility(game: Game, player: int, profile: StrategyProfile) -> float:
    """
    Expected payoff of one player under a product profile.

    The value is multilinear in each player's weights; at a profile of point
    masses it equals the tensor entry exactly.
    """
    game.check_player(player)
    profile.validate_for(game)
    return contract_profile(game.payoffs[player], profile)


def deviation_payoffs(game: Game, player: int, profile: StrategyProfile) -> np.ndarray:
    """
    Expected payoff of each pure strategy of a player against the others'
    strategies in the profile.
    """
    game.check_player(player)
    profile.validate_for(game)
    value = np.moveaxis(game.payoffs[player], player, -1)
    for other, strategy in enumerate(profile.strategies):
        if other != player:
            value = np.tensordot(strategy.weights, value, axes=(0, 0))
    return np.asarray(value, dtype=float)


def player_matrix(game: Game, player: int) -> np.ndarray:
    """
    A player's payoffs as a matrix: one row per own pure strategy, one column
    per opponent pure profile (lexicographic over the other players).
    """
    game.check_player(player)
    count = game.strategy_counts[player]
    return np.moveaxis(game.payoffs[player], player, 0).reshape(count, -1)


def is_zero_sum(game: Game, tol: float = DEFAULT_TOLERANCE) -> bool:
    """True iff the payoffs sum to zero (within tol) at every outcome."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return bool(np.all(np.abs(game.total_payoff()) <= tol))


@dataclass(frozen=True)
class ConstantSumCheck:
    """Result of the conservation-law test; constant is set only when it holds"""

    holds: bool
    constant: Optional[float]
    minimum: float
    maximum: float

    def __bool__(self) -> bool:
        return self.holds

    @property
    def spread(self) -> float:
        return self.maximum - self.minimum


def is_constant_sum(game: Game, tol: float = DEFAULT_TOLERANCE) -> ConstantSumCheck:
    """
    Check the conservation law: the payoffs sum to the same constant at every
    outcome (within tol). The mean total is returned as the constant.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    totals = game.total_payoff()
    minimum = float(np.min(totals))
    maximum = float(np.max(totals))
    holds = maximum - minimum <= tol
    constant = None
    if holds:
        constant = float(np.mean(totals))
        if abs(constant) <= tol:
            constant = 0.0
        constant = snap_zero(constant)
    logger.debug(
        f"Constant-sum check: range [{minimum}, {maximum}], holds={holds}"
    )
    return ConstantSumCheck(
        holds=holds, constant=constant, minimum=minimum, maximum=maximum
    )
