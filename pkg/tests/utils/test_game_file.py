"""
Unit tests for game file parsing, emission and fixture loading.
"""

import json

import numpy as np
import pytest

from conserve_cli.business.game_model import Game, StrategyProfile
from conserve_cli.constants import DiagnosticCode
from conserve_cli.utils.common_utils import GameFileError
from conserve_cli.utils.game_file import (
    GameMetadata,
    emit_game,
    format_profile,
    list_fixtures,
    load_game_file,
    parse_game,
    parse_game_document,
    parse_profile,
)
from tests.games import PD_X1, random_game

MINIMAL = '{"players": 1, "strategies": [1], "payoffs": [[0]]}'


def document(**fields) -> str:
    base = {"players": 2, "strategies": [2, 2], "payoffs": [[1, 2, 3, 4], [4, 3, 2, 1]]}
    base.update(fields)
    return json.dumps(base, indent=2)


class TestParseGame:
    """Test parsing valid game documents."""

    def test_minimal_document(self):
        """Test the 1-player, 1-strategy game with payoff 0."""
        game = parse_game(MINIMAL)
        assert game.num_players == 1
        assert game.strategy_counts == (1,)
        assert game.payoffs[0].tolist() == [0.0]

    def test_prisoners_dilemma_fixture(self):
        """Test that the bundled PD matches the example matrices."""
        game_file = load_game_file("prisoners_dilemma")
        assert np.array_equal(game_file.game.payoffs[0], PD_X1)
        assert np.array_equal(game_file.game.payoffs[1], PD_X1.T)
        assert game_file.title == "Prisoner's Dilemma"
        assert game_file.metadata.profiles == ["1,0:1,0", "0.5,0.5:0.5,0.5"]
        assert game_file.game.strategy_label(0, 1) == "defect"

    def test_row_major_layout(self):
        """Test that player 1's index varies slowest."""
        game = parse_game(document())
        assert game.payoffs[0].tolist() == [[1.0, 2.0], [3.0, 4.0]]

    def test_scientific_notation(self):
        """Test that exponents are accepted."""
        game = parse_game(document(payoffs=[[1e-3, 2.5E2, -1, 0], [0, 0, 0, 0]]))
        assert game.payoffs[0][0, 1] == 250.0

    def test_names_and_metadata(self):
        """Test optional names and free-form metadata."""
        text = document(
            names={"players": ["Row", "Column"], "strategies": [["u", "d"], ["l", "r"]]},
            metadata={"title": "Named", "source": "test", "notes": "kept"},
        )
        game_file = parse_game_document(text)
        assert game_file.game.player_label(1) == "Column"
        assert game_file.title == "Named"


class TestDiagnostics:
    """Test that each input problem has its own diagnostic code."""

    @pytest.mark.parametrize("text", ["", "   \n"])
    def test_empty_document(self, text):
        """Test that an empty document is rejected."""
        with pytest.raises(GameFileError) as exc:
            parse_game(text)
        assert exc.value.code == DiagnosticCode.EMPTY_DOCUMENT

    def test_syntax_error_has_line(self):
        """Test that malformed JSON reports its line."""
        with pytest.raises(GameFileError) as exc:
            parse_game('{\n  "players": 2,\n  "strategies": [2, 2\n}')
        assert exc.value.code == DiagnosticCode.SYNTAX
        assert exc.value.line == 4

    def test_length_mismatch(self):
        """Test 3 payoffs declared for a 2x2 game."""
        text = document(payoffs=[[1, 2, 3], [4, 3, 2, 1]])
        with pytest.raises(GameFileError) as exc:
            parse_game(text)
        error = exc.value
        assert error.code == DiagnosticCode.LENGTH_MISMATCH
        assert error.field == "payoffs[0]"
        assert error.line == text.splitlines().index('  "payoffs": [') + 1
        assert "LENGTH_MISMATCH" in str(error)

    @pytest.mark.parametrize("token", ["NaN", "Infinity", "-Infinity", "1e999"])
    def test_non_finite(self, token):
        """Test that NaN and overflowing numbers are rejected."""
        text = (
            '{"players": 1, "strategies": [2],\n'
            f' "payoffs": [[0, {token}]]}}'
        )
        with pytest.raises(GameFileError) as exc:
            parse_game(text)
        assert exc.value.code == DiagnosticCode.NON_FINITE
        assert exc.value.line == 2

    def test_missing_field(self):
        """Test that a missing payoffs field is named."""
        with pytest.raises(GameFileError) as exc:
            parse_game('{"players": 1, "strategies": [1]}')
        assert exc.value.code == DiagnosticCode.MISSING_FIELD
        assert exc.value.field == "payoffs"

    def test_unknown_field(self):
        """Test that a misspelled field is rejected."""
        with pytest.raises(GameFileError) as exc:
            parse_game(document(payoff=[[0]]))
        assert exc.value.code == DiagnosticCode.UNKNOWN_FIELD
        assert exc.value.field == "payoff"

    def test_player_count_mismatch(self):
        """Test strategies listed for the wrong number of players."""
        with pytest.raises(GameFileError) as exc:
            parse_game(document(players=3))
        assert exc.value.code == DiagnosticCode.PLAYER_COUNT_MISMATCH

    @pytest.mark.parametrize(
        "fields,field",
        [
            ({"players": 0, "strategies": [], "payoffs": []}, "players"),
            ({"strategies": [0, 2]}, "strategies[0]"),
            ({"players": "two"}, "players"),
        ],
    )
    def test_invalid_values(self, fields, field):
        """Test out-of-range and mistyped values."""
        with pytest.raises(GameFileError) as exc:
            parse_game(document(**fields))
        assert exc.value.code == DiagnosticCode.INVALID_VALUE
        assert exc.value.field == field

    def test_names_must_fit(self):
        """Test that strategy names must match the counts."""
        with pytest.raises(GameFileError) as exc:
            parse_game(document(names={"strategies": [["a"], ["b", "c"]]}))
        assert exc.value.code == DiagnosticCode.INVALID_VALUE
        assert exc.value.field == "names"

    def test_top_level_must_be_object(self):
        """Test that a bare array is a syntax error."""
        with pytest.raises(GameFileError) as exc:
            parse_game("[1, 2]")
        assert exc.value.code == DiagnosticCode.SYNTAX


class TestEmitGame:
    """Test game file emission."""

    def test_round_trip(self):
        """Test that emit then parse gives the same payoffs."""
        rng = np.random.default_rng(1)
        game = random_game(rng, 3, (2, 3, 2))
        again = parse_game(emit_game(game))
        for original, parsed in zip(game.payoffs, again.payoffs):
            assert np.allclose(original, parsed, rtol=1e-11, atol=1e-11)

    def test_round_trip_keeps_names_and_metadata(self):
        """Test that labels and metadata survive emission."""
        game_file = load_game_file("prisoners_dilemma")
        text = emit_game(game_file.game, game_file.metadata)
        again = parse_game_document(text)
        assert again.game.player_names == game_file.game.player_names
        assert again.metadata.profiles == game_file.metadata.profiles
        assert emit_game(again.game, again.metadata) == text

    def test_negative_zero_and_integers(self):
        """Test that -0 is written as 0 and integral values as integers."""
        game = Game(payoffs=(np.array([-0.0, 2.0, 0.1 + 0.2]),))
        data = json.loads(emit_game(game, GameMetadata(title="t")))
        assert data["payoffs"] == [[0, 2, 0.3]]
        assert data["metadata"] == {"title": "t"}
        assert "-0" not in emit_game(game)


class TestParseProfile:
    """Test profile strings."""

    def test_valid(self, pd_game):
        """Test a mixed and a pure strategy."""
        profile = parse_profile(".5,.5:1,0", pd_game)
        assert profile.as_tuples() == ((0.5, 0.5), (1.0, 0.0))

    @pytest.mark.parametrize(
        "text,match",
        [
            (".5,.5", "1 players"),
            (".5,.5,0:1,0", "2 strategies"),
            (".5,.6:1,0", "sum to"),
            ("1.5,-.5:1,0", "non-negative"),
            ("a,b:1,0", "not numbers"),
        ],
    )
    def test_invalid(self, pd_game, text, match):
        """Test that malformed profiles are input errors."""
        with pytest.raises(GameFileError, match=match) as exc:
            parse_profile(text, pd_game)
        assert exc.value.code == DiagnosticCode.INVALID_PROFILE

    def test_format_is_inverse(self, pd_game):
        """Test that formatting then parsing gives the same weights."""
        profile = StrategyProfile.uniform(pd_game)
        assert format_profile(profile) == "0.5,0.5:0.5,0.5"
        assert parse_profile(format_profile(profile), pd_game).as_tuples() == (
            profile.as_tuples()
        )


class TestFixtures:
    """Test bundled fixtures and file resolution."""

    def test_list(self):
        """Test the bundled fixture names."""
        assert list_fixtures() == [
            "matching_pennies",
            "prisoners_dilemma",
            "three_player_nonconstant",
            "zero_sum_2x2",
        ]

    @pytest.mark.parametrize(
        "name", ["matching_pennies", "three_player_nonconstant", "zero_sum_2x2"]
    )
    def test_every_fixture_parses(self, name):
        """Test that each fixture is a valid game file."""
        assert load_game_file(name).game.num_players >= 2

    def test_path_wins_over_fixture(self, tmp_path):
        """Test that a file path is read from disk."""
        path = tmp_path / "game.json"
        path.write_text(MINIMAL, encoding="utf-8")
        assert load_game_file(str(path)).game.num_players == 1

    def test_missing_source(self):
        """Test that an unknown name lists the fixtures."""
        with pytest.raises(GameFileError, match="prisoners_dilemma") as exc:
            load_game_file("no_such_game")
        assert exc.value.code == DiagnosticCode.FILE_NOT_FOUND
