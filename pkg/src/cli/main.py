# src/cli/main.py
# Command-line entry point: parses argv, applies --config defaults, runs one subcommand and writes its manifest.

import argparse
import os
from typing import Dict, List, Optional, Sequence, Tuple

from src.app import create_app
from src.artifacts import write_manifest
from src.cli.commands import Command, register_commands
from src.cli.commands.common import run_parameters
from src.cli.errors import ConfigurationError, EXIT_OK, UsageError, handle_error
from src.config import load_config, load_config_file
from src.utils.logger import logger
from src.utils.system_monitor import log_system_resources, start_resource_monitor, stop_resource_monitor

PROG = "isoscatter"


class CliArgumentParser(argparse.ArgumentParser):
    """Reports bad command lines as UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _shared_options() -> argparse.ArgumentParser:
    shared = CliArgumentParser(add_help=False)
    shared.add_argument("--config", default=None, help="Plain-text key=value file supplying default flag values.")
    shared.add_argument("--workers", type=int, default=None, help="Worker threads (default: ISOSCATTER_THREADS).")
    shared.add_argument("--log-level", default=None, help="Logging level (DEBUG, INFO, WARNING, ...).")
    shared.add_argument("--out", default=None, help="Output CSV file (output directory for synthesize).")
    return shared


def build_parser() -> Tuple[CliArgumentParser, Dict[str, Command], Dict[str, argparse.ArgumentParser]]:
    """Returns the top-level parser, the command registry and the subparser of every command."""
    parser = CliArgumentParser(prog=PROG, description="Isotropic random-environment scattering statistics.")
    subparsers = parser.add_subparsers(dest="command", metavar="SUBCOMMAND")
    subparsers.required = True
    registry = register_commands(subparsers, parents=[_shared_options()])
    return parser, registry, dict(subparsers.choices)


def _config_path(argv: Sequence[str]) -> Optional[str]:
    pre_parser = CliArgumentParser(add_help=False)
    pre_parser.add_argument("--config", default=None)
    known, _ = pre_parser.parse_known_args(list(argv))
    return known.config


def apply_config_file(path: str, subparsers: Dict[str, argparse.ArgumentParser]) -> None:
    """
    Installs the values of a ``--config`` file as parser defaults, so explicit flags still win.

    Raises:
        ConfigurationError: If the file is missing or names an unknown option.
    """
    try:
        values = load_config_file(path)
    except FileNotFoundError as e:
        raise ConfigurationError(f"Config file not found: {path}", flag="--config") from e
    known = set()
    for sub in subparsers.values():
        dests = {action.dest for action in sub._actions}
        known |= dests
        sub.set_defaults(**{key: value for key, value in values.items() if key in dests and key not in {"config", "help"}})
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigurationError(f"Unknown option(s) in {path}: {', '.join(unknown)}.", flag="--config")
    logger.debug(f"Defaults loaded from {path}: {sorted(values)}.")


def default_output(command: Command) -> str:
    return command.name if command.output_is_directory else f"{command.name}.csv"


def run(argv: Sequence[str]) -> int:
    """
    Runs one subcommand.

    Returns:
        Process exit code: 0 on success, the error's exit code otherwise.
    """
    monitor_started = False
    try:
        parser, registry, subparsers = build_parser()
        config_path = _config_path(argv)
        if config_path:
            apply_config_file(config_path, subparsers)
        args = parser.parse_args(list(argv))
        command = registry[args.command]
        if not args.out:
            args.out = default_output(command)

        config = load_config()
        app = create_app(config, workers=args.workers, log_level=args.log_level)
        if config.RESOURCE_MONITOR_INTERVAL > 0:
            start_resource_monitor(config.RESOURCE_MONITOR_INTERVAL)
            monitor_started = True

        logger.info(f"Running '{command.name}' with {app.workers} worker(s).")
        artifacts: List[str] = command.handler(args, app)
        manifest = write_manifest(args.out, command.name, run_parameters(args), artifacts)
        logger.info(f"'{command.name}' finished: {len(artifacts)} artifact(s), manifest {os.path.basename(manifest)}.")
        log_system_resources(command.name)
        return EXIT_OK
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else EXIT_OK
    except Exception as e:
        return handle_error(e)
    finally:
        if monitor_started:
            stop_resource_monitor()


__all__ = ["CliArgumentParser", "apply_config_file", "build_parser", "run"]
