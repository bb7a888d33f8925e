#!/usr/bin/env python3
"""conserve CLI - conservation-law transform and solvers for finite games"""

import argparse
import sys
from typing import Callable, Optional

from pydantic import ValidationError

from conserve_cli.commands import (
    check_command,
    equilibria_command,
    eu_command,
    fixtures_command,
    report_command,
    solve_command,
    transform_command,
)
from conserve_cli.constants import ExitCode
from conserve_cli.utils.common_utils import (
    ConserveError,
    GameFileError,
    InvariantViolationError,
    SingularBasisError,
)
from conserve_cli.utils.display import (
    configure_logging,
    handle_game_file_error,
    handle_invariant_error,
    handle_solver_error,
    handle_unexpected_error,
    handle_validation_error,
    print_warning,
)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


class ConserveArgumentParser(argparse.ArgumentParser):
    """Usage errors are input errors: exit 1, not argparse's 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        handle_validation_error(message)
        sys.exit(ExitCode.INPUT_ERROR)


class CommandRegistry:
    """Registry for CLI commands with their configurations"""

    def __init__(self):
        self.commands: dict[str, dict] = {}

    def register(
        self, name: str, help_text: str, func: Callable, needs_file: bool = True
    ):
        """Register a command with its configuration"""
        self.commands[name] = {
            "help": help_text,
            "func": func,
            "needs_file": needs_file,
        }
        return self

    def add_to_parser(self, subparsers):
        """Add all registered commands to the argument parser"""
        for name, config in self.commands.items():
            parser = subparsers.add_parser(name, help=config["help"])
            config["parser"] = parser
            parser.set_defaults(func=config["func"])
            if config["needs_file"]:
                parser.add_argument(
                    "file", help="Game file path or bundled fixture name"
                )
                add_analysis_options(parser)
            add_output_options(parser)


def add_analysis_options(parser):
    """Tolerance, cap and seed flags; unset flags fall back to CONSERVE_* env"""
    parser.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help="Predicate tolerance (default: 1e-9)",
    )
    parser.add_argument(
        "--max-support-size",
        dest="max_support_size",
        type=int,
        default=None,
        help="Largest strategy count for support enumeration (default: 6)",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Seed for the randomized self-checks (default: 0)",
    )


def add_output_options(parser):
    parser.add_argument("--json", action="store_true", help="Machine-readable output")
    parser.add_argument(
        "--log-level",
        dest="log_level",
        choices=LOG_LEVELS,
        type=str.upper,
        default="WARNING",
        help="Log level for messages on stderr (default: WARNING)",
    )


def setup_transform(parser):
    """Configure transform command arguments"""
    parser.add_argument(
        "-o", "--output", help="Write the transformed game to this game file"
    )
    parser.add_argument(
        "--augmented",
        action="store_true",
        help="With -o, write the (m+1)-player game including the passive player",
    )
    parser.epilog = """
Examples:
conserve transform prisoners_dilemma
conserve transform games/pd.json -o pd_transformed.json
conserve transform games/pd.json -o pd_augmented.json --augmented
"""
    parser.formatter_class = argparse.RawDescriptionHelpFormatter


def setup_profile_command(parser):
    """Configure eu and report profile arguments"""
    parser.add_argument(
        "--profile",
        action="append",
        help=(
            "Mixed profile: comma-separated probabilities per player, players "
            "separated by colons, e.g. .5,.5:1,0 (repeatable; defaults to the "
            "file's metadata.profiles)"
        ),
    )
    parser.epilog = """
Examples:
conserve eu prisoners_dilemma --profile 1,0:1,0 --profile .5,.5:.5,.5
conserve report prisoners_dilemma --json
"""
    parser.formatter_class = argparse.RawDescriptionHelpFormatter


def create_parser():
    """Create and configure the argument parser"""
    parser = ConserveArgumentParser(
        description="Conservation-law transform, minimax and equilibria of finite games"
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    registry = CommandRegistry()
    registry.register(
        "check", "Audit zero-sum and constant-sum structure", check_command.check_command
    )
    registry.register(
        "transform",
        "Add the passive player's payoff and show the zero-sum game",
        transform_command.transform_command,
    )
    registry.register(
        "solve",
        "Security levels, minimax bounds and the transformed game's value",
        solve_command.solve_command,
    )
    registry.register(
        "equilibria",
        "Nash equilibria of the original and transformed games",
        equilibria_command.equilibria_command,
    )
    registry.register(
        "eu", "Expected utilities and the value identity", eu_command.eu_command
    )
    registry.register(
        "report", "Run the full analysis pipeline", report_command.report_command
    )
    registry.register(
        "fixtures",
        "List bundled game fixtures",
        fixtures_command.fixtures_command,
        needs_file=False,
    )

    registry.add_to_parser(subparsers)

    setup_transform(registry.commands["transform"]["parser"])
    setup_profile_command(registry.commands["eu"]["parser"])
    setup_profile_command(registry.commands["report"]["parser"])

    return parser


def handle_error(error: BaseException) -> int:
    """Centralized error handling"""
    error_msg = str(error)

    if isinstance(error, InvariantViolationError):
        handle_invariant_error(error_msg)
        return ExitCode.INVARIANT_VIOLATION

    if isinstance(error, GameFileError):
        handle_game_file_error(error)
        return ExitCode.INPUT_ERROR

    if isinstance(error, ValidationError):
        handle_validation_error(error_msg)
        return ExitCode.INPUT_ERROR

    if isinstance(error, SingularBasisError):
        handle_solver_error(error_msg)
        return ExitCode.INPUT_ERROR

    if isinstance(error, KeyboardInterrupt):
        print_warning("Operation cancelled by user")
        return ExitCode.SUCCESS

    if isinstance(error, ConserveError):
        handle_validation_error(error_msg)
        return ExitCode.INPUT_ERROR

    handle_unexpected_error(error_msg)
    return ExitCode.INPUT_ERROR


def main(argv: Optional[list[str]] = None) -> int:
    """Main entry point for the CLI"""
    parser = create_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return ExitCode.SUCCESS

    configure_logging(args.log_level)
    try:
        args.func(args)
    except (Exception, KeyboardInterrupt) as e:
        return int(handle_error(e))
    return ExitCode.SUCCESS


if __name__ == "__main__":
    sys.exit(main())
