"""Full analysis report command."""

import logging

from conserve_cli.business.report_logic import AnalysisReport, run_pipeline
from conserve_cli.commands.common import load_inputs, requested_profiles, wants_json
from conserve_cli.commands.equilibria_command import EQUILIBRIUM_COLUMNS
from conserve_cli.commands.eu_command import VALUE_IDENTITY_COLUMNS
from conserve_cli.commands.solve_command import SECURITY_COLUMNS
from conserve_cli.utils.common_utils import format_number
from conserve_cli.utils.display import display_panel, display_table, print_json_document
from conserve_cli.utils.formatting import (
    audit_lines,
    dominance_rows,
    equilibrium_rows,
    equilibrium_title,
    payoff_columns,
    payoff_rows,
    report_to_dict,
    section_rows,
    security_rows,
    settings_lines,
    solve_lines,
    transform_summary_lines,
    value_identity_rows,
)

logger = logging.getLogger(__name__)


def display_report(report: AnalysisReport):
    game = report.game
    transformed = report.transform.transformed_game

    display_panel(
        f"Conservation Audit: {report.title}",
        audit_lines(report.zero_sum, report.conservation),
    )
    display_panel("Settings", settings_lines(report.settings), border_style="dim")
    display_table(
        "Passive Player Transform",
        payoff_columns(game),
        payoff_rows(game, report.transform),
    )
    display_panel(
        "Transform Summary",
        transform_summary_lines(report.transform, report.passive_maximizers),
        border_style="green",
    )

    if report.original_security is not None:
        display_table(
            "Original Security Levels",
            SECURITY_COLUMNS,
            security_rows(report.original_security, game),
        )
    if report.transformed_security is not None:
        display_table(
            "Transformed Security Levels",
            SECURITY_COLUMNS,
            security_rows(report.transformed_security, transformed),
        )
    if report.original_bounds is not None:
        display_panel("Original Game Bounds", solve_lines(report.original_bounds))
    if report.transformed_solution is not None:
        display_panel(
            "Transformed Zero-Sum Game",
            solve_lines(report.transformed_solution),
            border_style="green",
        )

    for name, found in report.equilibria.items():
        if found is None:
            continue
        title = equilibrium_title(f"Equilibria ({name.replace('_', ', ')})", found)
        if not found:
            display_panel(title, "No equilibria found", border_style="yellow")
            continue
        display_table(title, EQUILIBRIUM_COLUMNS, equilibrium_rows(found, game))
    if report.equilibria_differ is not None:
        verdict = "differ" if report.equilibria_differ else "coincide"
        display_panel("Original vs Transformed", f"Equilibrium sets {verdict}")
    if any(report.dominated.values()):
        display_table(
            "Strictly Dominated Strategies",
            [("Player", "cyan"), ("Strategy", "red"), ("Dominated by", "green")],
            dominance_rows(report),
        )
    else:
        display_panel("Strictly Dominated Strategies", "None")

    if report.value_identity:
        display_table(
            "Value Identity",
            VALUE_IDENTITY_COLUMNS,
            value_identity_rows(report.value_identity),
        )
    if report.self_checks:
        display_table(
            "Self-checks",
            [("Check", "cyan"), ("Runs", "white"), ("Max error", "green")],
            [
                [check.name, str(check.checks), format_number(check.max_error)]
                for check in report.self_checks
            ],
        )
    display_table(
        "Sections",
        [("Section", "cyan"), ("Status", "white"), ("Reason", "dim")],
        section_rows(report),
    )


def report_command(args):
    game_file, settings = load_inputs(args)
    profiles = requested_profiles(args, game_file, settings)

    report = run_pipeline(
        game_file.game, settings, profiles=profiles, title=game_file.title
    )
    skipped = report.skipped_sections()
    if skipped:
        logger.warning(f"Skipped sections: {', '.join(sorted(skipped))}")

    if wants_json(args):
        print_json_document(report_to_dict(report))
        return
    display_report(report)
