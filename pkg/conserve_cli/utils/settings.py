"""
Analysis settings for the conserve CLI.

- Holds every tolerance and size cap used by the solvers
- Reads overrides from CONSERVE_* environment variables
- Applies per-invocation overrides from parsed CLI args
"""

from functools import lru_cache
from typing import Any, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from conserve_cli.constants import (
    DEFAULT_MAX_SUPPORT_SIZE,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    SNAP_TOLERANCE,
)


class AnalysisSettings(BaseSettings):
    """Tolerances and caps shared by the pipeline and the solvers"""

    model_config = SettingsConfigDict(env_prefix="CONSERVE_", frozen=True)

    tolerance: float = Field(default=DEFAULT_TOLERANCE, ge=0)
    closure_tolerance: float = Field(default=1e-9, ge=0)
    feasibility_tolerance: float = Field(default=1e-8, ge=0)
    duality_gap_tolerance: float = Field(default=1e-7, ge=0)
    regret_tolerance: float = Field(default=1e-8, ge=0)
    dedup_tolerance: float = Field(default=1e-6, ge=0)
    singular_tolerance: float = Field(default=1e-10, ge=0)
    snap_tolerance: float = Field(default=SNAP_TOLERANCE, ge=0)

    max_support_size: int = Field(default=DEFAULT_MAX_SUPPORT_SIZE, ge=1)
    max_lp_outcomes: int = Field(default=4096, ge=1)
    max_pure_outcomes: int = Field(default=65536, ge=1)
    max_simplex_iterations: int = Field(default=10000, ge=1)

    seed: int = DEFAULT_SEED
    self_check_samples: int = Field(default=16, ge=0)
    canonical_strategies: bool = True


@lru_cache(maxsize=1)
def get_settings() -> AnalysisSettings:
    """Process-wide settings built from defaults and the environment."""
    return AnalysisSettings()


_ARG_FIELDS = {
    "tolerance": "tolerance",
    "max_support_size": "max_support_size",
    "seed": "seed",
}


def settings_from_args(args: Optional[object]) -> AnalysisSettings:
    """
    Build settings for one command invocation.

    Order of precedence:
    1) explicit CLI flags (--tolerance, --max-support-size, --seed)
    2) CONSERVE_* environment variables
    3) defaults

    Returns:
        AnalysisSettings for this invocation
    """
    overrides: dict[str, Any] = {}
    if args is not None:
        for attr, field_name in _ARG_FIELDS.items():
            value = getattr(args, attr, None)
            if value is not None:
                overrides[field_name] = value

    if not overrides:
        return get_settings()
    # init kwargs take priority over the environment and are validated
    return AnalysisSettings(**overrides)
