# src/cli/commands/sweeps.py
# synthesize, analyze-touchstone and estimate: stirred sweeps on disk and their statistics.

import argparse
import os
from typing import List

import numpy as np

from src.artifacts import read_sweep_csv, write_csv, write_sweep_csv
from src.cli.commands.common import Command, add_ensemble_arguments, ensemble_config, float_list, port_pair
from src.cli.errors import ValidationError
from src.domain.estimator import PortModelType, PortNormModel
from src.domain.network import SweepDataset
from src.services.multiport_service import make_orthogonal_port_forms
from src.services.sweep_service import constant_profile, frequency_grid, ramp_profile, variance_curve
from src.touchstone import read_sweep_directory, write_sweep_directory
from src.utils.logger import logger
from src.utils.substreams import master_stream

PORT_FORM_STREAM = 0

ESTIMATE_HEADER = ["freq_hz", "var_spp", "var_sqq", "var_spq", "predicted_var_spq", "rel_residual", "rho_hat",
                   "rho_half_width", "rho_hat_normalized", "sample_count"]


def load_sweep(path: str) -> SweepDataset:
    """A directory of Touchstone files or a long-format sweep CSV."""
    if os.path.isdir(path):
        return read_sweep_directory(path)
    return read_sweep_csv(path)


# --- synthesize ---

def add_synthesize_arguments(parser: argparse.ArgumentParser) -> None:
    add_ensemble_arguments(parser)
    parser.add_argument("--rho-end", type=float, default=None,
                        help="Final rho of a linear rho(f) ramp starting at --rho (default: constant rho).")
    parser.add_argument("--stirs", type=int, default=200, help="Number of stir states.")
    parser.add_argument("--freqs", type=int, default=100, help="Number of frequencies.")
    parser.add_argument("--f-start", type=float, default=1e9, help="First frequency (Hz).")
    parser.add_argument("--f-stop", type=float, default=6e9, help="Last frequency (Hz).")
    parser.add_argument("--ports", type=int, default=2, help="Number of ports P (at most 4).")
    parser.add_argument("--norms", type=float_list, default=None, help="Comma-separated row norms ||L_p||.")
    parser.add_argument("--format", choices=["RI", "MA", "DB"], default="RI", help="Touchstone number format.")
    parser.add_argument("--sweep-csv", default=None, help="Also write the sweep as a long-format CSV.")


def handle_synthesize(args: argparse.Namespace, app) -> List[str]:
    sie = ensemble_config(args)
    forms = make_orthogonal_port_forms(args.ports, sie.dimension, args.norms, master_stream(args.seed, PORT_FORM_STREAM))
    profile = constant_profile(sie.rho) if args.rho_end is None else ramp_profile(sie.rho, args.rho_end)
    grid = frequency_grid(args.freqs, args.f_start, args.f_stop)
    dataset = app.sweep_service.synthesize_sweep(sie, forms, args.stirs, grid, args.seed, rho_profile=profile)
    paths = write_sweep_directory(dataset, args.out, data_format=args.format)
    if args.sweep_csv:
        paths.append(write_sweep_csv(args.sweep_csv, dataset))
    return paths


# --- analyze-touchstone ---

def add_analyze_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dir", default=None, help="Directory with one .sNp file per stir state.")
    parser.add_argument("--ports", type=port_pair, default=(1, 2), help="Port pair p,q (default 1,2).")


def handle_analyze(args: argparse.Namespace, app) -> List[str]:
    if not args.dir:
        raise ValidationError("--dir is required.", flag="--dir")
    curve = variance_curve(read_sweep_directory(args.dir), tuple(args.ports))
    defined = np.isfinite(curve.column("rel_residual")).sum()
    if defined:
        logger.info(f"Median relative residual over {defined} frequencies: {curve.median_residual():.4g}.")
    else:
        logger.warning("No frequency has a defined residual (var(S_pq) is zero everywhere).")
    return [write_csv(args.out, curve.header, (curve.as_tuple(row) for row in curve.rows))]


# --- estimate ---

def add_estimate_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--in", dest="input", default=None, help="Sweep CSV (stir,freq_hz,row,col,re,im) or directory.")
    parser.add_argument("--ref-ports", type=port_pair, default=(1, 2), help="Reference port pair p,q.")
    parser.add_argument("--dim", type=int, default=None, help="Wave-space dimension N, if known.")
    parser.add_argument("--ref-reflection", type=float_list, default=None,
                        help="|S_pp| of the two reference antennas (default 0,0: matched).")
    parser.add_argument("--ref-efficiency", type=float_list, default=None,
                        help="Efficiency C of the two reference antennas (default 1,1: lossless).")


def _reference_models(args: argparse.Namespace):
    reflections = args.ref_reflection or [0.0, 0.0]
    efficiencies = args.ref_efficiency or [1.0, 1.0]
    if len(reflections) != 2 or len(efficiencies) != 2:
        raise ValidationError("Give two values for --ref-reflection and --ref-efficiency.", flag="--ref-reflection")
    return tuple(PortNormModel(PortModelType.SCATTERING, reflection=r, efficiency=c)
                 for r, c in zip(reflections, efficiencies))


def handle_estimate(args: argparse.Namespace, app) -> List[str]:
    if not args.input:
        raise ValidationError("--in is required.", flag="--in")
    estimates = app.estimator_service.estimate_sweep(load_sweep(args.input), tuple(args.ref_ports), N=args.dim,
                                                     reference_ports=_reference_models(args))
    if estimates:
        mean_rho = sum(e.rho_hat for e in estimates) / len(estimates)
        logger.info(f"Mean rho_hat over {len(estimates)} frequencies: {mean_rho:.6g}.")
    rows = ([e.to_dict()[key] for key in ESTIMATE_HEADER] for e in estimates)
    return [write_csv(args.out, ESTIMATE_HEADER, rows)]


SYNTHESIZE_COMMAND = Command(
    name="synthesize",
    help="Synthesize a stirred multi-port sweep as Touchstone files.",
    add_arguments=add_synthesize_arguments,
    handler=handle_synthesize,
    output_is_directory=True,
)

ANALYZE_COMMAND = Command(
    name="analyze-touchstone",
    help="Per-frequency variance curves and the universal-ratio residual of a sweep directory.",
    add_arguments=add_analyze_arguments,
    handler=handle_analyze,
)

ESTIMATE_COMMAND = Command(
    name="estimate",
    help="Estimate rho and predicted coupling variances from reference-port statistics.",
    add_arguments=add_estimate_arguments,
    handler=handle_estimate,
)
