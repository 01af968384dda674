# src/cli/commands/__init__.py
# Registers the subcommands with the argument parser.

import argparse
from typing import Dict, Sequence

from src.utils.logger import logger
from .common import Command
from .ensemble import GENERATE_COMMAND, MOMENTS_COMMAND
from .multiport import CHECK_COMMAND, PERTURB_COMMAND
from .sphere import COMMAND as SPHERE_COMMAND
from .sweeps import ANALYZE_COMMAND, ESTIMATE_COMMAND, SYNTHESIZE_COMMAND

# List of subcommands to register
# Add new subcommands here as they are created
COMMANDS = [
    SPHERE_COMMAND,
    GENERATE_COMMAND,
    MOMENTS_COMMAND,
    PERTURB_COMMAND,
    CHECK_COMMAND,
    ESTIMATE_COMMAND,
    SYNTHESIZE_COMMAND,
    ANALYZE_COMMAND,
]


def register_commands(subparsers, parents: Sequence[argparse.ArgumentParser] = ()) -> Dict[str, Command]:
    """
    Adds one subparser per command.

    Args:
        subparsers: The action returned by ``add_subparsers``.
        parents: Parsers carrying the options every subcommand shares.

    Returns:
        Mapping of subcommand name to its Command.
    """
    registry = {}
    for command in COMMANDS:
        sub = subparsers.add_parser(command.name, help=command.help, description=command.help, parents=list(parents))
        command.add_arguments(sub)
        sub.set_defaults(command=command.name)
        registry[command.name] = command
        logger.debug(f"Subcommand '{command.name}' registered.")
    return registry


__all__ = ["COMMANDS", "Command", "register_commands"]
