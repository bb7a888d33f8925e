"""
Unit tests for the game model module.
"""

import numpy as np
import pytest

from conserve_cli.business.game_model import (
    Game,
    MixedStrategy,
    StrategyProfile,
    contract_profile,
    deviation_payoffs,
    expected_utility,
    is_constant_sum,
    is_zero_sum,
    player_matrix,
)
from conserve_cli.utils.common_utils import ShapeError
from tests.games import random_game, random_shape


class TestGame:
    """Test game construction and validation."""

    def test_shape_mismatch_rejected(self):
        """Test that payoff tensors of different shapes are rejected."""
        with pytest.raises(ShapeError, match="player 2"):
            Game(payoffs=(np.zeros((2, 2)), np.zeros((2, 3))))

    def test_axis_count_must_match_players(self):
        """Test that a 2-player game needs 2-axis tensors."""
        with pytest.raises(ShapeError, match="2 axes"):
            Game(payoffs=(np.zeros((2, 2, 2)), np.zeros((2, 2, 2))))

    def test_non_finite_payoff_rejected(self):
        """Test that NaN and infinite payoffs are rejected."""
        payoff = np.array([[1.0, np.nan], [0.0, 1.0]])
        with pytest.raises(ShapeError, match="not finite"):
            Game(payoffs=(payoff, payoff))

    def test_names_must_match_counts(self):
        """Test that strategy names must match strategy counts."""
        with pytest.raises(ShapeError, match="Strategy names"):
            Game(
                payoffs=(np.zeros((2, 2)), np.zeros((2, 2))),
                strategy_names=(("a", "b"), ("c",)),
            )

    def test_payoffs_are_read_only(self, pd_game):
        """Test that a game's tensors cannot be modified in place."""
        with pytest.raises(ValueError):
            pd_game.payoffs[0][0, 0] = 1.0

    def test_default_labels(self):
        """Test default player and strategy labels."""
        game = Game(payoffs=(np.zeros((2, 3)), np.zeros((2, 3))))
        assert game.player_label(0) == "P1"
        assert game.strategy_label(1, 2) == "s2"
        assert game.outcome_label((1, 0)) == "(s1, s0)"

    def test_named_labels(self, pd_game):
        """Test labels taken from the game's names."""
        assert pd_game.player_label(1) == "Prisoner 2"
        assert pd_game.outcome_label((0, 1)) == "(cooperate, defect)"

    def test_outcomes_are_lexicographic(self):
        """Test that the first player's index varies slowest."""
        game = Game(payoffs=(np.zeros((2, 3)), np.zeros((2, 3))))
        assert list(game.outcomes())[:4] == [(0, 0), (0, 1), (0, 2), (1, 0)]
        assert game.num_outcomes == 6

    def test_single_player_single_strategy(self):
        """Test the smallest valid game."""
        game = Game(payoffs=(np.zeros((1,)),))
        assert game.num_players == 1
        assert game.strategy_counts == (1,)

    def test_check_player(self, pd_game):
        """Test that player indices are range checked."""
        with pytest.raises(ShapeError, match="out of range"):
            pd_game.check_player(2)


class TestMixedStrategy:
    """Test mixed strategy validation and constructors."""

    @pytest.mark.parametrize(
        "weights,match",
        [
            ([0.5, 0.6], "sum to"),
            ([1.2, -0.2], "negative"),
            ([], "non-empty"),
            ([np.inf, 0.0], "finite"),
        ],
    )
    def test_invalid_weights(self, weights, match):
        """Test that weights off the simplex are rejected."""
        with pytest.raises(ShapeError, match=match):
            MixedStrategy(np.array(weights, dtype=float))

    def test_round_off_is_clipped(self):
        """Test that tiny negative weights within tolerance are clipped."""
        strategy = MixedStrategy(np.array([-1e-12, 1.0 + 1e-12]))
        assert strategy.weights[0] == 0.0

    def test_pure_and_uniform(self):
        """Test the pure and uniform constructors."""
        pure = MixedStrategy.pure(2, 3)
        assert pure.weights.tolist() == [0.0, 0.0, 1.0]
        assert pure.pure_index == 2
        uniform = MixedStrategy.uniform(4)
        assert np.allclose(uniform.weights, 0.25)
        assert uniform.support == (0, 1, 2, 3)
        assert uniform.pure_index is None

    def test_pure_index_out_of_range(self):
        """Test that a pure strategy index must exist."""
        with pytest.raises(ShapeError):
            MixedStrategy.pure(3, 3)

    def test_from_solution_renormalizes(self):
        """Test that solver output is clipped and renormalized."""
        strategy = MixedStrategy.from_solution([0.5, 0.5 + 1e-10, -1e-11])
        assert strategy.weights.sum() == pytest.approx(1.0, abs=1e-15)
        assert strategy.weights[2] == 0.0


class TestStrategyProfile:
    """Test strategy profiles."""

    def test_validate_for_wrong_player_count(self, pd_game):
        """Test that a profile must have one strategy per player."""
        profile = StrategyProfile((MixedStrategy.uniform(2),))
        with pytest.raises(ShapeError, match="1 strategies"):
            profile.validate_for(pd_game)

    def test_validate_for_wrong_size(self, pd_game):
        """Test that each strategy must fit its player."""
        profile = StrategyProfile((MixedStrategy.uniform(2), MixedStrategy.uniform(3)))
        with pytest.raises(ShapeError, match="player 2"):
            profile.validate_for(pd_game)

    def test_outcome_distribution(self, three_player_game):
        """Test that the product measure sums to one and matches E."""
        rng = np.random.default_rng(3)
        profile = StrategyProfile(
            tuple(MixedStrategy.from_solution(rng.random(2)) for _ in range(3))
        )
        distribution = profile.outcome_distribution()
        assert distribution.shape == (2, 2, 2)
        assert distribution.sum() == pytest.approx(1.0)
        direct = float(np.sum(distribution * three_player_game.payoffs[1]))
        assert expected_utility(three_player_game, 1, profile) == pytest.approx(direct)

    def test_replace(self, pd_game):
        """Test replacing one player's strategy."""
        profile = StrategyProfile.uniform(pd_game)
        replaced = profile.replace(0, MixedStrategy.pure(1, 2))
        assert replaced.strategies[0].pure_index == 1
        assert profile.strategies[0].pure_index is None


class TestExpectedUtility:
    """Test expected utility and contraction."""

    def test_pd_all_cooperate(self, pd_game):
        """Test E at (cooperate, cooperate) is -0.6 for both players."""
        profile = StrategyProfile.pure(pd_game, (0, 0))
        assert expected_utility(pd_game, 0, profile) == pytest.approx(-0.6, abs=1e-12)
        assert expected_utility(pd_game, 1, profile) == pytest.approx(-0.6, abs=1e-12)

    def test_pd_uniform(self, pd_game):
        """Test E at the uniform profile is -3.9 for both players."""
        profile = StrategyProfile.uniform(pd_game)
        assert expected_utility(pd_game, 0, profile) == pytest.approx(-3.9, abs=1e-12)
        assert expected_utility(pd_game, 1, profile) == pytest.approx(-3.9, abs=1e-12)

    def test_pure_profile_is_tensor_entry(self):
        """Test that a pure profile reads the payoff tensor exactly."""
        rng = np.random.default_rng(11)
        game = random_game(rng, 3, (2, 3, 2))
        for outcome in game.outcomes():
            profile = StrategyProfile.pure(game, outcome)
            for player in range(3):
                assert expected_utility(game, player, profile) == game.payoffs[player][outcome]

    def test_uniform_profile_is_tensor_mean(self):
        """Test that utility at the uniform profile is the payoff tensor mean."""
        rng = np.random.default_rng(17)
        for _ in range(200):
            num_players, counts = random_shape(rng)
            game = random_game(rng, num_players, counts)
            profile = StrategyProfile.uniform(game)
            for player in range(num_players):
                assert expected_utility(game, player, profile) == pytest.approx(
                    float(np.mean(game.payoffs[player])), abs=1e-9
                )

    def test_multilinear_in_each_player(self):
        """Test linearity in one player's weights with the others fixed."""
        rng = np.random.default_rng(5)
        for _ in range(50):
            game = random_game(rng, 3, (3, 2, 2))
            base = StrategyProfile(
                tuple(
                    MixedStrategy.from_solution(rng.dirichlet(np.ones(c)))
                    for c in game.strategy_counts
                )
            )
            mover = int(rng.integers(3))
            count = game.strategy_counts[mover]
            first = MixedStrategy.from_solution(rng.dirichlet(np.ones(count)))
            second = MixedStrategy.from_solution(rng.dirichlet(np.ones(count)))
            weight = float(rng.random())
            mixed = MixedStrategy.from_solution(
                weight * first.weights + (1 - weight) * second.weights
            )
            combined = weight * expected_utility(
                game, 0, base.replace(mover, first)
            ) + (1 - weight) * expected_utility(game, 0, base.replace(mover, second))
            assert expected_utility(game, 0, base.replace(mover, mixed)) == pytest.approx(
                combined, abs=1e-9
            )

    def test_contract_profile_matches_expected_utility(self, pd_game):
        """Test that contraction of a payoff tensor is the expected utility."""
        profile = StrategyProfile.uniform(pd_game)
        assert contract_profile(pd_game.payoffs[0], profile) == expected_utility(
            pd_game, 0, profile
        )

    def test_deviation_payoffs(self, pd_game):
        """Test pure deviation payoffs against a uniform opponent."""
        profile = StrategyProfile.uniform(pd_game)
        payoffs = deviation_payoffs(pd_game, 0, profile)
        assert payoffs == pytest.approx([-5.3, -2.5])

    def test_player_matrix_column_order(self, three_player_game):
        """Test that opponent profiles are ordered lexicographically."""
        matrix = player_matrix(three_player_game, 1)
        assert matrix.shape == (2, 4)
        payoff = three_player_game.payoffs[1]
        for own in range(2):
            for column in range(4):
                first, third = divmod(column, 2)
                assert matrix[own, column] == payoff[first, own, third]


class TestSumPredicates:
    """Test the zero-sum and constant-sum predicates."""

    def test_zero_sum(self, matching_pennies, pd_game):
        """Test zero-sum detection."""
        assert is_zero_sum(matching_pennies)
        assert not is_zero_sum(pd_game)

    def test_zero_sum_tolerance(self, matching_pennies):
        """Test that the tolerance decides near-zero totals."""
        a, b = matching_pennies.payoffs
        game = matching_pennies.with_payoffs([a, b + 1e-10])
        assert is_zero_sum(game, tol=1e-9)
        assert not is_zero_sum(game, tol=1e-11)

    def test_negative_tolerance_rejected(self, pd_game):
        """Test that a negative tolerance is an error."""
        with pytest.raises(ValueError):
            is_zero_sum(pd_game, tol=-1.0)
        with pytest.raises(ValueError):
            is_constant_sum(pd_game, tol=-1.0)

    def test_constant_sum(self, matching_pennies):
        """Test that a shifted zero-sum game is constant-sum."""
        a, b = matching_pennies.payoffs
        check = is_constant_sum(matching_pennies.with_payoffs([a + 1.0, b + 2.0]))
        assert check.holds
        assert check.constant == pytest.approx(3.0)
        assert check.spread == pytest.approx(0.0)

    def test_zero_sum_is_constant_sum_with_zero(self, zero_sum_2x2):
        """Test that a zero-sum game has constant 0."""
        check = is_constant_sum(zero_sum_2x2)
        assert check.holds
        assert check.constant == 0.0

    def test_pd_is_not_constant_sum(self, pd_game):
        """Test the PD sum range and that the law fails."""
        check = is_constant_sum(pd_game)
        assert not check
        assert check.constant is None
        assert check.minimum == pytest.approx(-10.0)
        assert check.maximum == pytest.approx(-1.2)
