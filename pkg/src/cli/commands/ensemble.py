# src/cli/commands/ensemble.py
# gen-ensemble and moments: SIE scattering-matrix ensembles and their second moments.

import argparse
from typing import List, Sequence, Tuple

from src.artifacts import read_ensemble_csv, write_csv, write_ensemble_csv
from src.cli.commands.common import Command, add_ensemble_arguments, ensemble_config, quadruples
from src.cli.errors import ShapeError
from src.domain.ensemble import SieConfig
from src.utils.logger import logger

MOMENT_HEADER = ["k", "l", "m", "n", "empirical_re", "empirical_im", "predicted", "predicted_exact", "stderr"]


def default_quadruples(N: int) -> List[Tuple[int, int, int, int]]:
    """Coincident patterns plus a few that must vanish."""
    if N < 2:
        return [(1, 1, 1, 1)]
    return [(1, 1, 1, 1), (1, 2, 1, 2), (1, 2, 2, 1), (2, 2, 2, 2), (1, 1, 2, 2), (1, 2, 2, 2), (1, 1, 1, 2)]


# --- gen-ensemble ---

def add_generate_arguments(parser: argparse.ArgumentParser) -> None:
    add_ensemble_arguments(parser, count_default=1000)


def handle_generate(args: argparse.Namespace, app) -> List[str]:
    sie = ensemble_config(args)
    samples = app.ensemble_service.generate(sie, args.count, args.seed)
    return [write_ensemble_csv(args.out, samples)]


# --- moments ---

def add_moment_arguments(parser: argparse.ArgumentParser) -> None:
    add_ensemble_arguments(parser, count_default=10000)
    parser.add_argument("--quadruples", type=quadruples, default=None,
                        help="1-based index quadruples 'k,l,m,n;k,l,m,n' (default: a standard set).")
    parser.add_argument("--in", dest="input", default=None,
                        help="Stored ensemble CSV (from gen-ensemble) instead of sampling.")


def _moment_rows(entries) -> Sequence[list]:
    rows = []
    for entry in entries:
        data = entry.to_dict()
        rows.append([data[key] for key in MOMENT_HEADER])
    return rows


def handle_moments(args: argparse.Namespace, app) -> List[str]:
    if args.input:
        samples = read_ensemble_csv(args.input)
        N = samples.shape[1]
        if args.dim is not None and args.dim != N:
            raise ShapeError(f"--dim {args.dim} does not match the stored ensemble (N={N}).", flag="--dim")
        args.dim = N
        sie = ensemble_config(args)
        report = app.ensemble_service.moments_from_samples(sie, samples, args.quadruples or default_quadruples(N))
    else:
        sie: SieConfig = ensemble_config(args)
        report = app.ensemble_service.empirical_moments(sie, args.count, args.quadruples or default_quadruples(sie.dimension),
                                                        args.seed)
    if report.variances.shape[0] >= 2:
        logger.info(f"var(S_11)/var(S_12) = {report.variances[0, 0] / report.variances[0, 1]:.6g} (expected 2).")
    if report.entries:
        worst = max(report.entries, key=lambda entry: entry.deviation())
        logger.info(f"Largest deviation from the asymptotic prediction: {worst.deviation():.3g} at {worst.quadruple}.")
    return [write_csv(args.out, MOMENT_HEADER, _moment_rows(report.entries))]


GENERATE_COMMAND = Command(
    name="gen-ensemble",
    help="Generate SIE scattering matrices and store them as CSV.",
    add_arguments=add_generate_arguments,
    handler=handle_generate,
)

MOMENTS_COMMAND = Command(
    name="moments",
    help="Monte Carlo second moments E(S_kl conj S_mn) against the closed forms.",
    add_arguments=add_moment_arguments,
    handler=handle_moments,
)
