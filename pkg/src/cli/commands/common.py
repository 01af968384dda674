# src/cli/commands/common.py
# Shared argument types, argument groups and helpers for the subcommands.

import argparse
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Tuple

from src.cli.errors import InvalidDimensionError
from src.config import config
from src.domain.ensemble import EigenvalueDistribution, MODE_ALIASES, SieConfig

# Parameters never echoed into manifests: they must not change any output byte.
NON_SEMANTIC = {"workers", "log_level", "config", "command"}


@dataclass(frozen=True)
class Command:
    """A subcommand: its name, argument registration and handler (returns written artifact paths)."""
    name: str
    help: str
    add_arguments: Callable[[argparse.ArgumentParser], None]
    handler: Callable[[argparse.Namespace, Any], List[str]]
    output_is_directory: bool = False


# --- Argument types (argparse turns their ValueErrors into usage errors) ---

def int_list(text: str) -> List[int]:
    return [int(part) for part in str(text).replace(";", ",").split(",") if part.strip()]


def float_list(text: str) -> List[float]:
    return [float(part) for part in str(text).split(",") if part.strip()]


def port_pair(text: str) -> Tuple[int, int]:
    values = int_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated ports, got {text!r}")
    return values[0], values[1]


def quadruples(text: str) -> List[Tuple[int, int, int, int]]:
    """``"1,1,1,1;1,2,1,2"`` -> [(1, 1, 1, 1), (1, 2, 1, 2)]."""
    result = []
    for chunk in str(text).split(";"):
        if not chunk.strip():
            continue
        values = [int(part) for part in chunk.split(",")]
        if len(values) != 4:
            raise argparse.ArgumentTypeError(f"each quadruple needs four indices, got {chunk!r}")
        result.append(tuple(values))
    return result


# --- Argument groups ---

def add_seed_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="Master seed (64-bit unsigned).")


def add_ensemble_arguments(parser: argparse.ArgumentParser, count_default: int = 10000) -> None:
    parser.add_argument("--dim", type=int, required=False, default=None, help="Wave-space dimension N.")
    parser.add_argument("--rho", type=float, default=1.0, help="Effective reflection coefficient in (0, 1].")
    parser.add_argument("--count", type=int, default=count_default, help="Number of ensemble samples M.")
    parser.add_argument("--mode", choices=sorted(MODE_ALIASES), default="isotropic",
                        help="paper or isotropic: independent isotropic vectors; frame: orthonormal frame; coe: rho U^T U.")
    parser.add_argument("--eigenvalues", choices=[e.value for e in EigenvalueDistribution],
                        default=EigenvalueDistribution.FIXED_MODULUS_UNIFORM_PHASE.value,
                        help="Distribution of the spectral multipliers.")
    parser.add_argument("--terms", type=int, default=None, help="Number of rank-one terms K (default N).")
    add_seed_argument(parser)


def require_dimension(args: argparse.Namespace) -> int:
    if args.dim is None:
        raise InvalidDimensionError("--dim is required.", flag="--dim")
    return args.dim


def ensemble_config(args: argparse.Namespace) -> SieConfig:
    return SieConfig.from_mode(require_dimension(args), args.rho, args.mode,
                               eigenvalue_dist=args.eigenvalues, term_count=args.terms)


def run_parameters(args: argparse.Namespace) -> Dict[str, Any]:
    """Echo of every semantic parameter of the run, for the manifest."""
    params = {}
    for key, value in sorted(vars(args).items()):
        if key in NON_SEMANTIC or key.startswith("_"):
            continue
        params[key] = list(value) if isinstance(value, tuple) else value
    return params
