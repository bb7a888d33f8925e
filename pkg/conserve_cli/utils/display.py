"""
Display utilities for the conserve CLI using Rich.
"""

import json
import logging
from typing import Any

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from conserve_cli.utils.common_utils import GameFileError

console = Console()
error_console = Console(stderr=True)


def configure_logging(level: str = "WARNING"):
    """Send log records to stderr through Rich so stdout stays clean."""
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=error_console, show_path=False)],
        force=True,
    )


def display_panel(title: str, content: str, border_style: str = "blue"):
    """Render a summary section as a fitted panel."""
    console.print(Panel.fit(content, title=title, border_style=border_style))


def display_table(title: str, columns: list, rows: list):
    """
    Render one report section as a table.

    Args:
        title: Section title shown above the table
        columns: (header, rich style) pairs
        rows: Pre-formatted cell strings, one list per row
    """
    table = Table(title=title)

    for column_name, style in columns:
        table.add_column(column_name, style=style)

    for row in rows:
        table.add_row(*row)

    console.print(table)


def print_json_document(data: Any):
    """Write a JSON document to stdout without markup or highlighting."""
    console.out(json.dumps(data, indent=2), highlight=False)


def print_success(message: str):
    """Confirmation on stdout, e.g. a written game file."""
    console.print(f"[green]{message}[/green]")


def print_error(message: str):
    """Print an error message."""
    error_console.print(f"[red]✗ {escape(message)}[/red]")


def print_warning(message: str):
    """Print a warning message."""
    error_console.print(f"[yellow]⚠ {escape(message)}[/yellow]")


def print_info(message: str):
    """Note on stdout that qualifies the tables around it."""
    console.print(f"[blue]i {message}[/blue]")


def handle_game_file_error(error: GameFileError):
    """Handle game file diagnostics with code and location."""
    print_error(f"Invalid game input {error}")


def handle_validation_error(message: str):
    """Handle validation errors with user-friendly message."""
    print_error(f"Validation error: {message}")


def handle_solver_error(details: str):
    """Handle numerical solver failures."""
    print_error("The solver could not finish reliably")
    error_console.print(f"[dim]Details: {escape(details)}[/dim]")


def handle_invariant_error(details: str):
    """Handle a failed internal invariant."""
    print_error(f"Internal check failed: {details}")
    error_console.print(
        "[dim]Re-run with --log-level DEBUG to see the steps leading here[/dim]"
    )


def handle_unexpected_error(error: str):
    """Handle unexpected errors with user-friendly message."""
    print_error(f"An unexpected error occurred: {error}")
