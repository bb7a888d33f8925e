"""
Utility classes for the conserve CLI - exceptions and numeric helpers shared
across business logic, commands and formatting.
"""

import math
from typing import Optional, Union

import numpy as np

from conserve_cli.constants import SIGNIFICANT_DIGITS, SNAP_TOLERANCE, DiagnosticCode


class ConserveError(Exception):
    """Base class for all toolkit errors"""

    pass


class GameFileError(ConserveError, ValueError):
    """Raised when a game document cannot be turned into a valid game"""

    def __init__(
        self,
        code: DiagnosticCode,
        message: str,
        field: Optional[str] = None,
        line: Optional[int] = None,
    ):
        self.code = code
        self.message = message
        self.field = field
        self.line = line
        super().__init__(str(self))

    def __str__(self) -> str:
        location = []
        if self.field:
            location.append(self.field)
        if self.line is not None:
            location.append(f"(line {self.line})")
        where = f" {' '.join(location)}" if location else ""
        return f"[{self.code.value}]{where}: {self.message}"


class ShapeError(ConserveError, ValueError):
    """Raised when a profile, strategy or player index does not fit a game"""

    pass


class ContractViolationError(ConserveError, ValueError):
    """Raised when an operation is called outside its precondition"""

    pass


class SizeCapExceededError(ConserveError, ValueError):
    """Raised when an analysis would exceed a configured size cap"""

    def __init__(self, cap_name: str, limit: int, actual: int):
        self.cap_name = cap_name
        self.limit = limit
        self.actual = actual
        super().__init__(f"{cap_name}={limit} exceeded (needs {actual})")


class SingularBasisError(ConserveError, RuntimeError):
    """Raised when the simplex method runs into a numerically singular basis"""

    pass


class InvariantViolationError(ConserveError, AssertionError):
    """Raised when a verified invariant of the analysis does not hold"""

    pass


def snap_zero(value: float, tol: float = SNAP_TOLERANCE) -> float:
    """Return 0.0 for magnitudes below tol (also turns -0.0 into 0.0)."""
    if abs(value) < tol:
        return 0.0
    return float(value)


def magnitude_scale(*arrays) -> float:
    """Largest absolute entry, floored at 1; absolute tolerances are scaled by it."""
    largest = max(
        (float(np.max(np.abs(a))) for a in arrays if np.size(a)), default=0.0
    )
    return max(1.0, largest)


def clean_number(
    value: float, digits: int = SIGNIFICANT_DIGITS, tol: float = SNAP_TOLERANCE
) -> Union[int, float]:
    """
    Normalize a float for emission: snap tiny values to zero, round to the
    given number of significant digits and return an int when integral.
    """
    value = snap_zero(float(value), tol)
    if not math.isfinite(value):
        raise ValueError(f"Cannot emit non-finite number {value}")
    rounded = float(f"{value:.{digits}g}")
    if rounded == 0.0:
        return 0
    if rounded.is_integer() and abs(rounded) < 1e15:
        return int(rounded)
    return rounded


def clean_nested(values) -> Union[list, int, float]:
    """Apply clean_number to every entry of an array-like, keeping nesting."""
    if isinstance(values, np.ndarray):
        values = values.tolist()
    if isinstance(values, (list, tuple)):
        return [clean_nested(v) for v in values]
    return clean_number(values)


def format_number(value: float) -> str:
    """Text form of clean_number, used in tables and game files."""
    return str(clean_number(value))
