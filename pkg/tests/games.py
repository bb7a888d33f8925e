"""
Game builders shared by the test suites.
"""

import numpy as np

from conserve_cli.business.game_model import Game

PD_X1 = np.array([[-0.6, -10.0], [0.0, -5.0]])


def pd_game() -> Game:
    """Prisoner's dilemma with x2 the transpose of x1."""
    return Game(
        payoffs=(PD_X1, PD_X1.T),
        player_names=("Prisoner 1", "Prisoner 2"),
        strategy_names=(("cooperate", "defect"), ("cooperate", "defect")),
    )


def random_game(rng: np.random.Generator, num_players: int, counts, low=-10, high=10):
    shape = tuple(counts)
    return Game(
        payoffs=tuple(rng.uniform(low, high, size=shape) for _ in range(num_players))
    )


def random_zero_sum_game(rng: np.random.Generator, num_players: int, counts):
    shape = tuple(counts)
    payoffs = [rng.uniform(-10, 10, size=shape) for _ in range(num_players - 1)]
    payoffs.append(-np.sum(payoffs, axis=0))
    return Game(payoffs=tuple(payoffs))


def random_shape(rng: np.random.Generator, max_players=4, max_count=4):
    num_players = int(rng.integers(2, max_players + 1))
    counts = tuple(int(c) for c in rng.integers(1, max_count + 1, size=num_players))
    return num_players, counts
