"""
Unit tests for shared errors and number normalization.
"""

import math

import numpy as np
import pytest

from conserve_cli.constants import DiagnosticCode
from conserve_cli.utils.common_utils import (
    GameFileError,
    SizeCapExceededError,
    clean_nested,
    clean_number,
    format_number,
    magnitude_scale,
)


class TestCleanNumber:
    """Test normalization of emitted numbers."""

    @pytest.mark.parametrize(
        "value,expected",
        [
            (-0.0, 0),
            (1e-13, 0),
            (5.0, 5),
            (-0.6, -0.6),
            (0.1 + 0.2, 0.3),
            (1.0 / 3.0, 0.333333333333),
            (2.5e-7, 2.5e-7),
        ],
    )
    def test_values(self, value, expected):
        """Test snapping, rounding and integer conversion."""
        result = clean_number(value)
        assert result == expected
        assert type(result) is type(expected)

    def test_non_finite(self):
        """Test that infinities cannot be emitted."""
        with pytest.raises(ValueError):
            clean_number(math.inf)

    def test_nested(self):
        """Test that arrays keep their nesting."""
        assert clean_nested(np.array([[-0.0, 0.5], [2.0, 1e-14]])) == [[0, 0.5], [2, 0]]

    def test_format_number(self):
        """Test the text form used in tables."""
        assert format_number(-0.0) == "0"
        assert format_number(3.9) == "3.9"

    def test_magnitude_scale(self):
        """Test that the scale tracks the largest entry and never drops below 1."""
        assert magnitude_scale(np.array([0.1, -0.5])) == 1.0
        assert magnitude_scale(np.array([3.0]), np.array([[-2e8, 1.0]])) == 2e8
        assert magnitude_scale(np.array([])) == 1.0


class TestErrors:
    """Test error messages."""

    def test_game_file_error_location(self):
        """Test that code, field and line appear in the message."""
        error = GameFileError(
            DiagnosticCode.LENGTH_MISMATCH, "3 payoffs given", field="payoffs[0]", line=5
        )
        assert str(error) == "[LENGTH_MISMATCH] payoffs[0] (line 5): 3 payoffs given"
        assert isinstance(error, ValueError)

    def test_game_file_error_without_location(self):
        """Test the message when nothing is located."""
        error = GameFileError(DiagnosticCode.EMPTY_DOCUMENT, "document is empty")
        assert str(error) == "[EMPTY_DOCUMENT]: document is empty"

    def test_size_cap_names_the_cap(self):
        """Test that the cap name and sizes are reported."""
        error = SizeCapExceededError("max_support_size", 6, 7)
        assert str(error) == "max_support_size=6 exceeded (needs 7)"
