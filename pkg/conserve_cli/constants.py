"""
Constants for the conserve CLI.
"""

from enum import Enum, IntEnum

DEFAULT_TOLERANCE = 1e-9
PROBABILITY_TOLERANCE = 1e-9
SNAP_TOLERANCE = 1e-12
SIGNIFICANT_DIGITS = 12

DEFAULT_MAX_SUPPORT_SIZE = 6
DEFAULT_SEED = 0

PASSIVE_PLAYER_NAME = "passive"
PASSIVE_STRATEGY_NAME = "0"

SECTION_DISPLAY_NAMES = {
    "audit": "Conservation audit",
    "transform": "Passive player transform",
    "solve_original": "Original game values",
    "solve_transformed": "Transformed game values",
    "equilibria_original_pure": "Original game pure equilibria",
    "equilibria_original_mixed": "Original game mixed equilibria",
    "equilibria_transformed_pure": "Transformed game pure equilibria",
    "equilibria_transformed_mixed": "Transformed game mixed equilibria",
    "value_identity": "Value identity",
    "self_checks": "Self-checks",
}


class ExitCode(IntEnum):
    SUCCESS = 0
    INPUT_ERROR = 1
    INVARIANT_VIOLATION = 2


class SectionStatus(str, Enum):
    COMPLETED = "completed"
    SKIPPED = "skipped"

    @property
    def display_text(self):
        return {
            self.COMPLETED: "Completed",
            self.SKIPPED: "Skipped",
        }[self]

    @property
    def color(self):
        return {
            self.COMPLETED: "green",
            self.SKIPPED: "yellow",
        }[self]


class DiagnosticCode(str, Enum):
    EMPTY_DOCUMENT = "EMPTY_DOCUMENT"
    SYNTAX = "SYNTAX"
    MISSING_FIELD = "MISSING_FIELD"
    LENGTH_MISMATCH = "LENGTH_MISMATCH"
    NON_FINITE = "NON_FINITE"
    INVALID_VALUE = "INVALID_VALUE"
    PLAYER_COUNT_MISMATCH = "PLAYER_COUNT_MISMATCH"
    UNKNOWN_FIELD = "UNKNOWN_FIELD"
    INVALID_PROFILE = "INVALID_PROFILE"
    FILE_NOT_FOUND = "FILE_NOT_FOUND"


class EquilibriumMethod(str, Enum):
    PURE_SCAN = "pure_scan"
    SUPPORT_ENUMERATION = "support_enumeration"

    @property
    def display_text(self):
        return {
            self.PURE_SCAN: "Pure deviation scan",
            self.SUPPORT_ENUMERATION: "Support enumeration",
        }[self]
