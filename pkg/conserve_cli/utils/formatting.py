"""
Report formatting for the conserve CLI.

Every section has a dict form (for --json) and a table form (for rich
output) built from the same values, so both outputs carry the same fields.
"""

from typing import Any, Optional

from conserve_cli.business.equilibrium_logic import EquilibriumSet
from conserve_cli.business.game_model import ConstantSumCheck, Game, MixedStrategy
from conserve_cli.business.minimax_logic import (
    MaximinResult,
    SolveResult,
    ValueIdentityRow,
)
from conserve_cli.business.report_logic import AnalysisReport
from conserve_cli.business.transform_logic import TransformResult
from conserve_cli.constants import SECTION_DISPLAY_NAMES
from conserve_cli.utils.common_utils import clean_nested, clean_number, format_number
from conserve_cli.utils.game_file import format_profile
from conserve_cli.utils.settings import AnalysisSettings

Columns = list[tuple[str, str]]
Rows = list[list[str]]


def format_strategy(strategy: MixedStrategy) -> str:
    return "(" + ", ".join(format_number(w) for w in strategy.weights) + ")"


def format_optional(value: Optional[float]) -> str:
    return "N/A" if value is None else format_number(value)


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def audit_to_dict(zero_sum: bool, conservation: ConstantSumCheck) -> dict[str, Any]:
    return {
        "zero_sum": zero_sum,
        "constant_sum": conservation.holds,
        "constant": (
            None if conservation.constant is None else clean_number(conservation.constant)
        ),
        "sum_range": [
            clean_number(conservation.minimum),
            clean_number(conservation.maximum),
        ],
    }


def audit_lines(zero_sum: bool, conservation: ConstantSumCheck) -> str:
    data = audit_to_dict(zero_sum, conservation)
    constant = "N/A" if data["constant"] is None else str(data["constant"])
    low, high = data["sum_range"]
    return "\n".join(
        [
            f"[bold]Zero-sum:[/bold] {'yes' if zero_sum else 'no'}",
            f"[bold]Constant-sum:[/bold] {'yes' if conservation.holds else 'no'}",
            f"[bold]Constant:[/bold] {constant}",
            f"[bold]Sum range:[/bold] [{low}, {high}]",
        ]
    )


def transform_to_dict(
    result: TransformResult, maximizers: Optional[list[tuple[int, ...]]] = None
) -> dict[str, Any]:
    game = result.transformed_game
    data: dict[str, Any] = {
        "passive_payoff": clean_nested(result.passive_payoff),
        "passive_player_payoff": clean_nested(result.passive_total),
        "transformed_payoffs": [clean_nested(p) for p in game.payoffs],
        "max_abs_residual": clean_number(result.max_abs_residual),
        "original_was_zero_sum": result.original_was_zero_sum,
        "original_was_constant_sum": result.original_was_constant_sum,
        "shift_is_constant": result.shift_is_constant,
        "augmented_total_range": [clean_number(v) for v in result.augmented_total_range],
    }
    if maximizers is not None:
        data["passive_maximizers"] = [game.outcome_label(o) for o in maximizers]
    return data


def transform_summary_lines(
    result: TransformResult, maximizers: Optional[list[tuple[int, ...]]] = None
) -> str:
    data = transform_to_dict(result, maximizers)
    low, high = data["augmented_total_range"]
    lines = [
        f"[bold]Max |sum of x~|:[/bold] {data['max_abs_residual']}",
        f"[bold]Original zero-sum:[/bold] {_yes_no(result.original_was_zero_sum)}",
        f"[bold]x0 constant (plain shift):[/bold] {_yes_no(result.shift_is_constant)}",
        f"[bold]Passive payoff range:[/bold] [{low}, {high}]",
    ]
    if maximizers is not None:
        lines.append(
            "[bold]Passive payoff maximal at:[/bold] "
            + ", ".join(data["passive_maximizers"])
        )
    return "\n".join(lines)


def payoff_columns(game: Game) -> Columns:
    m = game.num_players
    columns = [("Outcome", "cyan")]
    columns.extend((f"x{i + 1}", "white") for i in range(m))
    columns.append(("sum", "magenta"))
    columns.append(("x0", "yellow"))
    columns.extend((f"x~{i + 1}", "green") for i in range(m))
    columns.append((f"passive ({m}*x0)", "yellow"))
    return columns


def payoff_rows(game: Game, result: TransformResult) -> Rows:
    """One row per joint outcome, lexicographic."""
    totals = game.total_payoff()
    rows = []
    for outcome in game.outcomes():
        row = [game.outcome_label(outcome)]
        row.extend(format_number(p[outcome]) for p in game.payoffs)
        row.append(format_number(totals[outcome]))
        row.append(format_number(result.passive_payoff[outcome]))
        row.extend(format_number(p[outcome]) for p in result.transformed_game.payoffs)
        row.append(format_number(result.passive_total[outcome]))
        rows.append(row)
    return rows


def security_to_dict(results: list[MaximinResult], game: Game) -> list[dict[str, Any]]:
    return [
        {
            "player": game.player_label(r.player),
            "security_level": clean_number(r.value),
            "strategy": clean_nested(r.strategy.weights),
        }
        for r in results
    ]


def security_rows(results: list[MaximinResult], game: Game) -> Rows:
    return [
        [game.player_label(r.player), format_number(r.value), format_strategy(r.strategy)]
        for r in results
    ]


def solve_to_dict(result: SolveResult) -> dict[str, Any]:
    return {
        "lower_value": clean_number(result.lower_value),
        "upper_value": (
            None if result.upper_value is None else clean_number(result.upper_value)
        ),
        "duality_gap": (
            None if result.duality_gap is None else clean_number(result.duality_gap)
        ),
        "maximin_strategy": clean_nested(result.maximin_strategy.weights),
        "minimax_strategy": (
            None
            if result.minimax_strategy is None
            else clean_nested(result.minimax_strategy.weights)
        ),
        "iterations": result.iterations,
    }


def solve_lines(result: SolveResult) -> str:
    lines = [
        f"[bold]Lower value (sup-inf):[/bold] {format_number(result.lower_value)}",
        f"[bold]Upper value (inf-sup):[/bold] {format_optional(result.upper_value)}",
        f"[bold]Duality gap:[/bold] {format_optional(result.duality_gap)}",
        f"[bold]Player 1 maximin strategy:[/bold] {format_strategy(result.maximin_strategy)}",
    ]
    if result.minimax_strategy is not None:
        lines.append(
            f"[bold]Player 2 minimax strategy:[/bold] "
            f"{format_strategy(result.minimax_strategy)}"
        )
    lines.append(f"[bold]Simplex pivots:[/bold] {result.iterations}")
    return "\n".join(lines)


def equilibria_to_dict(found: EquilibriumSet, game: Game) -> dict[str, Any]:
    return {
        "method": found.method.value,
        "degenerate": found.degenerate,
        "skipped_supports": found.skipped_supports,
        "entries": [
            {
                "profile": format_profile(entry.profile),
                "labels": _profile_label(game, entry.profile),
                "payoffs": [clean_number(v) for v in entry.payoffs],
                "max_regret": clean_number(entry.max_regret),
            }
            for entry in found
        ],
    }


def _profile_label(game: Game, profile) -> str:
    pure = [s.pure_index for s in profile.strategies]
    if all(index is not None for index in pure):
        return game.outcome_label(pure)
    return " x ".join(format_strategy(s) for s in profile.strategies)


def equilibrium_rows(found: EquilibriumSet, game: Game) -> Rows:
    return [
        [
            str(index + 1),
            _profile_label(game, entry.profile),
            ", ".join(format_number(v) for v in entry.payoffs),
            format_number(entry.max_regret),
        ]
        for index, entry in enumerate(found)
    ]


def equilibrium_title(label: str, found: EquilibriumSet) -> str:
    """Table title naming the method, degeneracy and singular supports."""
    notes = []
    if found.degenerate:
        notes.append("degenerate")
    if found.skipped_supports:
        notes.append(f"{found.skipped_supports} singular support pairs skipped")
    title = f"{label}: {found.method.display_text}"
    if notes:
        title += f" ({', '.join(notes)})"
    return title


def value_identity_to_dict(row: ValueIdentityRow) -> dict[str, Any]:
    return {
        "label": row.label,
        "profile": format_profile(row.profile),
        "e_original": [clean_number(v) for v in row.e_original],
        "e_passive": clean_number(row.e_passive),
        "e_transformed": [clean_number(v) for v in row.e_transformed],
        "original_regret": (
            None if row.original_regret is None else clean_number(row.original_regret)
        ),
        "transformed_regret": (
            None
            if row.transformed_regret is None
            else clean_number(row.transformed_regret)
        ),
    }


def value_identity_rows(rows: list[ValueIdentityRow]) -> Rows:
    return [
        [
            row.label or "-",
            format_profile(row.profile),
            ", ".join(format_number(v) for v in row.e_original),
            format_number(row.e_passive),
            ", ".join(format_number(v) for v in row.e_transformed),
            format_optional(row.original_regret),
            format_optional(row.transformed_regret),
        ]
        for row in rows
    ]


def dominance_to_dict(report: AnalysisReport) -> list[dict[str, Any]]:
    game = report.game
    return [
        {
            "player": game.player_label(player),
            "dominated": game.strategy_label(player, dominated),
            "by": game.strategy_label(player, dominating),
        }
        for player, pairs in report.dominated.items()
        for dominated, dominating in pairs
    ]


def dominance_rows(report: AnalysisReport) -> Rows:
    return [[d["player"], d["dominated"], d["by"]] for d in dominance_to_dict(report)]


def settings_to_dict(settings: AnalysisSettings) -> dict[str, Any]:
    return {
        "tolerance": settings.tolerance,
        "max_support_size": settings.max_support_size,
        "seed": settings.seed,
    }


def settings_lines(settings: AnalysisSettings) -> str:
    return "\n".join(
        f"[bold]{key.replace('_', ' ').capitalize()}:[/bold] {value}"
        for key, value in settings_to_dict(settings).items()
    )


def report_to_dict(report: AnalysisReport) -> dict[str, Any]:
    """Machine form of the full report; deterministic for a given input."""
    game = report.game
    data: dict[str, Any] = {
        "title": report.title,
        "players": game.num_players,
        "strategies": list(game.strategy_counts),
        "settings": settings_to_dict(report.settings),
        "audit": audit_to_dict(report.zero_sum, report.conservation),
        "transform": transform_to_dict(report.transform, report.passive_maximizers),
        "solve": {
            "original_security_levels": (
                None
                if report.original_security is None
                else security_to_dict(report.original_security, game)
            ),
            "transformed_security_levels": (
                None
                if report.transformed_security is None
                else security_to_dict(report.transformed_security, game)
            ),
            "original_bounds": (
                None
                if report.original_bounds is None
                else solve_to_dict(report.original_bounds)
            ),
            "transformed_solution": (
                None
                if report.transformed_solution is None
                else solve_to_dict(report.transformed_solution)
            ),
        },
        "equilibria": {
            name: None if found is None else equilibria_to_dict(found, game)
            for name, found in report.equilibria.items()
        },
        "equilibria_differ": report.equilibria_differ,
        "dominated_strategies": dominance_to_dict(report),
        "value_identity": [value_identity_to_dict(r) for r in report.value_identity],
        "self_checks": [
            {
                "name": check.name,
                "checks": check.checks,
                "max_error": clean_number(check.max_error),
            }
            for check in report.self_checks
        ],
        "sections": {
            name: {"status": outcome.status.value, "reason": outcome.reason}
            for name, outcome in report.sections.items()
        },
    }
    return data


def section_rows(report: AnalysisReport) -> Rows:
    rows = []
    for name, outcome in report.sections.items():
        status = outcome.status
        rows.append(
            [
                SECTION_DISPLAY_NAMES.get(name, name),
                f"[{status.color}]{status.display_text}[/{status.color}]",
                outcome.reason or "",
            ]
        )
    return rows
