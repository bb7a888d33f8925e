"""
Analysis pipeline for the conserve CLI - runs audit, transform, solve,
equilibria and value-identity steps on one game and collects the results
in an AnalysisReport.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, TypeVar

import numpy as np

from conserve_cli.business.equilibrium_logic import (
    EquilibriumSet,
    equilibrium_sets_differ,
    max_regret,
    pure_nash,
    strictly_dominated_strategies,
    support_enumeration_2p,
)
from conserve_cli.business.game_model import (
    ConstantSumCheck,
    Game,
    MixedStrategy,
    StrategyProfile,
    expected_utility,
    is_constant_sum,
    is_zero_sum,
)
from conserve_cli.business.minimax_logic import (
    MaximinResult,
    SolveResult,
    ValueIdentityRow,
    minimax_bounds_2p,
    security_levels,
    solve_zero_sum_2p,
    strategy_guarantee,
    value_identity_report,
)
from conserve_cli.business.transform_logic import (
    TransformResult,
    passive_payoff_maximizers,
    restore_original,
    transform_game,
)
from conserve_cli.constants import SectionStatus
from conserve_cli.utils.common_utils import (
    InvariantViolationError,
    SizeCapExceededError,
    magnitude_scale,
)
from conserve_cli.utils.settings import AnalysisSettings, get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class SectionOutcome:
    status: SectionStatus
    reason: Optional[str] = None


@dataclass(frozen=True)
class SelfCheck:
    name: str
    checks: int
    max_error: float = 0.0


@dataclass(frozen=True)
class LabeledProfile:
    label: str
    profile: StrategyProfile


@dataclass(eq=False)
class AnalysisReport:
    """Everything run_pipeline computed for one game"""

    game: Game
    title: str
    settings: AnalysisSettings
    zero_sum: bool
    conservation: ConstantSumCheck
    transform: TransformResult
    passive_maximizers: list[tuple[int, ...]] = field(default_factory=list)
    original_security: Optional[list[MaximinResult]] = None
    transformed_security: Optional[list[MaximinResult]] = None
    original_bounds: Optional[SolveResult] = None
    transformed_solution: Optional[SolveResult] = None
    equilibria: dict[str, Optional[EquilibriumSet]] = field(default_factory=dict)
    equilibria_differ: Optional[bool] = None
    dominated: dict[int, list[tuple[int, int]]] = field(default_factory=dict)
    value_identity: list[ValueIdentityRow] = field(default_factory=list)
    self_checks: list[SelfCheck] = field(default_factory=list)
    sections: dict[str, SectionOutcome] = field(default_factory=dict)

    def skipped_sections(self) -> dict[str, str]:
        return {
            name: outcome.reason or ""
            for name, outcome in self.sections.items()
            if outcome.status == SectionStatus.SKIPPED
        }


def _run_section(
    report: AnalysisReport, name: str, step: Callable[[], T]
) -> Optional[T]:
    """Run one step; a size cap marks the section skipped instead of failing."""
    try:
        value = step()
    except SizeCapExceededError as e:
        logger.warning(f"Section {name} skipped: {e}")
        report.sections[name] = SectionOutcome(SectionStatus.SKIPPED, str(e))
        return None
    if name not in report.sections:
        report.sections[name] = SectionOutcome(SectionStatus.COMPLETED)
    return value


def _skip(report: AnalysisReport, name: str, reason: str) -> None:
    logger.info(f"Section {name} skipped: {reason}")
    report.sections[name] = SectionOutcome(SectionStatus.SKIPPED, reason)


def _check_outcome_cap(game: Game, settings: AnalysisSettings) -> None:
    if game.num_outcomes > settings.max_pure_outcomes:
        raise SizeCapExceededError(
            "max_pure_outcomes", settings.max_pure_outcomes, game.num_outcomes
        )


def _solve_sections(report: AnalysisReport, settings: AnalysisSettings) -> None:
    game = report.game
    transformed = report.transform.transformed_game

    report.original_security = _run_section(
        report, "solve_original", lambda: security_levels(game, settings)
    )
    report.transformed_security = _run_section(
        report, "solve_transformed", lambda: security_levels(transformed, settings)
    )
    if game.num_players != 2:
        return
    if report.original_security is not None:
        report.original_bounds = _run_section(
            report, "solve_original", lambda: minimax_bounds_2p(game, settings)
        )
    if report.transformed_security is not None:
        report.transformed_solution = _run_section(
            report, "solve_transformed", lambda: solve_zero_sum_2p(transformed, settings)
        )


def _equilibria_sections(report: AnalysisReport, settings: AnalysisSettings) -> None:
    games = {
        "original": report.game,
        "transformed": report.transform.transformed_game,
    }
    for kind, game in games.items():

        def scan(game: Game = game) -> EquilibriumSet:
            _check_outcome_cap(game, settings)
            return pure_nash(game, settings.tolerance)

        report.equilibria[f"{kind}_pure"] = _run_section(
            report, f"equilibria_{kind}_pure", scan
        )
        mixed_name = f"equilibria_{kind}_mixed"
        if game.num_players == 2:
            report.equilibria[f"{kind}_mixed"] = _run_section(
                report,
                mixed_name,
                lambda game=game: support_enumeration_2p(game, settings),
            )
        else:
            report.equilibria[f"{kind}_mixed"] = None
            _skip(report, mixed_name, "support enumeration needs exactly 2 players")

    def richest(kind: str) -> Optional[EquilibriumSet]:
        mixed = report.equilibria.get(f"{kind}_mixed")
        if mixed is not None:
            return mixed
        return report.equilibria.get(f"{kind}_pure")

    original, transformed = richest("original"), richest("transformed")
    if original is not None and transformed is not None:
        report.equilibria_differ = equilibrium_sets_differ(
            original, transformed, settings.dedup_tolerance
        )

    report.dominated = {
        player: strictly_dominated_strategies(report.game, player, settings.tolerance)
        for player in range(report.game.num_players)
    }


def _solver_profile(report: AnalysisReport) -> Optional[LabeledProfile]:
    if report.transformed_solution is not None:
        return LabeledProfile(
            "transformed minimax", report.transformed_solution.optimal_profile()
        )
    if report.transformed_security is not None:
        return LabeledProfile(
            "transformed security strategies",
            StrategyProfile(tuple(r.strategy for r in report.transformed_security)),
        )
    return None


def _value_identity_section(
    report: AnalysisReport,
    profiles: Sequence[LabeledProfile],
    settings: AnalysisSettings,
) -> None:
    queried = list(profiles)
    solver = _solver_profile(report)
    if solver is not None:
        queried.append(solver)

    transformed = report.transform.transformed_game
    for item in queried:
        row = value_identity_report(
            report.game, report.transform, item.profile, settings, label=item.label
        )
        report.value_identity.append(
            replace(
                row,
                original_regret=max_regret(report.game, item.profile),
                transformed_regret=max_regret(transformed, item.profile),
            )
        )
    report.sections["value_identity"] = SectionOutcome(SectionStatus.COMPLETED)


def _random_profile(game: Game, rng: np.random.Generator) -> StrategyProfile:
    return StrategyProfile(
        tuple(
            MixedStrategy.from_solution(rng.dirichlet(np.ones(count)))
            for count in game.strategy_counts
        )
    )


def _self_checks(report: AnalysisReport, settings: AnalysisSettings) -> None:
    """
    Recompute invariants by independent routes; any failure raises
    InvariantViolationError.
    """
    game = report.game
    transform = report.transform
    rng = np.random.default_rng(settings.seed)
    checks: list[SelfCheck] = []
    # absolute tolerances grow with the payoff magnitude
    scale = magnitude_scale(*game.payoffs)
    closure_limit = settings.closure_tolerance * scale

    def fail_if(error: float, limit: float, what: str) -> None:
        if error > limit:
            raise InvariantViolationError(f"Self-check {what} failed: error {error:.3e}")

    fail_if(transform.max_abs_residual, closure_limit, "zero_sum_closure")
    checks.append(SelfCheck("zero_sum_closure", 1, transform.max_abs_residual))

    restored = restore_original(transform)
    bijection_error = max(
        float(np.max(np.abs(r - o))) for r, o in zip(restored.payoffs, game.payoffs)
    )
    fail_if(bijection_error, closure_limit, "bijection")
    checks.append(SelfCheck("bijection", 1, bijection_error))

    identity_error = 0.0
    linearity_error = 0.0
    for _ in range(settings.self_check_samples):
        profile = _random_profile(game, rng)
        row = value_identity_report(game, transform, profile, settings)
        identity_error = max(identity_error, row.max_identity_error)

        player = int(rng.integers(game.num_players))
        mover = int(rng.integers(game.num_players))
        weight = float(rng.random())
        first = _random_profile(game, rng).strategies[mover]
        second = _random_profile(game, rng).strategies[mover]
        mixed = MixedStrategy.from_solution(
            weight * first.weights + (1.0 - weight) * second.weights
        )
        direct = expected_utility(game, player, profile.replace(mover, mixed))
        combined = weight * expected_utility(
            game, player, profile.replace(mover, first)
        ) + (1.0 - weight) * expected_utility(
            game, player, profile.replace(mover, second)
        )
        linearity_error = max(linearity_error, abs(direct - combined))
    fail_if(linearity_error, closure_limit, "multilinearity")
    checks.append(
        SelfCheck("value_identity_random_profiles", settings.self_check_samples, identity_error)
    )
    checks.append(SelfCheck("multilinearity", settings.self_check_samples, linearity_error))

    certificate_error = 0.0
    certificates = 0
    for results, target in (
        (report.original_security, game),
        (report.transformed_security, transform.transformed_game),
    ):
        for result in results or []:
            guarantee = strategy_guarantee(target, result.player, result.strategy)
            shortfall = (result.value - guarantee) / (scale + abs(result.value))
            certificate_error = max(certificate_error, shortfall)
            certificates += 1
    fail_if(certificate_error, settings.duality_gap_tolerance, "maximin_certificates")
    checks.append(SelfCheck("maximin_certificates", certificates, max(0.0, certificate_error)))

    regret = 0.0
    entries = 0
    for found in report.equilibria.values():
        for entry in found or []:
            regret = max(regret, entry.max_regret)
            entries += 1
    fail_if(regret, settings.regret_tolerance * scale, "equilibrium_regret")
    checks.append(SelfCheck("equilibrium_regret", entries, regret))

    report.self_checks = checks
    report.sections["self_checks"] = SectionOutcome(SectionStatus.COMPLETED)


def run_pipeline(
    game: Game,
    settings: Optional[AnalysisSettings] = None,
    profiles: Sequence[LabeledProfile] = (),
    title: str = "Untitled game",
) -> AnalysisReport:
    """
    Audit, transform, solve and enumerate equilibria of one game.

    Sections that would exceed a size cap are marked skipped with the cap
    named; they never abort the report.

    Raises:
        InvariantViolationError: when a verified invariant fails
    """
    settings = settings or get_settings()
    for item in profiles:
        item.profile.validate_for(game)

    report = AnalysisReport(
        game=game,
        title=title,
        settings=settings,
        zero_sum=is_zero_sum(game, settings.tolerance),
        conservation=is_constant_sum(game, settings.tolerance),
        transform=transform_game(game, settings),
    )
    report.sections["audit"] = SectionOutcome(SectionStatus.COMPLETED)
    report.passive_maximizers = passive_payoff_maximizers(
        report.transform, settings.tolerance
    )
    report.sections["transform"] = SectionOutcome(SectionStatus.COMPLETED)
    logger.info(
        f"Audit done: zero-sum={report.zero_sum}, "
        f"constant-sum={report.conservation.holds}"
    )

    _solve_sections(report, settings)
    logger.info("Solve sections done")

    _equilibria_sections(report, settings)
    logger.info("Equilibrium sections done")

    _value_identity_section(report, profiles, settings)
    _self_checks(report, settings)
    logger.info(f"Report for '{title}' complete")
    return report
