"""
Shared fixtures for the test suites.
"""

import numpy as np
import pytest

from conserve_cli.business.game_model import Game
from conserve_cli.utils.settings import AnalysisSettings
from tests import games


@pytest.fixture
def settings():
    return AnalysisSettings()


@pytest.fixture
def pd_game():
    return games.pd_game()


@pytest.fixture
def zero_sum_2x2():
    a = np.array([[2.0, -1.0], [-1.0, 1.0]])
    return Game(payoffs=(a, -a))


@pytest.fixture
def matching_pennies():
    a = np.array([[1.0, -1.0], [-1.0, 1.0]])
    return Game(payoffs=(a, -a))


@pytest.fixture
def three_player_game():
    counts = (2, 2, 2)
    return Game(
        payoffs=(
            np.array([3, 0, 1, -2, 4, 2, -1, 5], dtype=float).reshape(counts),
            np.array([1, 2, -3, 0, 2, -1, 4, 1], dtype=float).reshape(counts),
            np.array([-2, 1, 0, 3, -1, 0, 2, -4], dtype=float).reshape(counts),
        )
    )
