# src/cli/commands/sphere.py
# sample-sphere: isotropic unit vectors on the real or complex sphere.

import argparse
from typing import List

import numpy as np

from src.artifacts import write_csv
from src.cli.commands.common import Command, add_seed_argument, require_dimension
from src.domain.sphere import Field, IsotropicSampleConfig
from src.services.sphere_service import complex_moment, moment
from src.utils.logger import logger


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dim", type=int, default=None, help="Dimension n (real) or N (complex).")
    parser.add_argument("--count", type=int, default=1000, help="Number of vectors.")
    parser.add_argument("--field", choices=[f.value for f in Field], default=Field.REAL.value)
    add_seed_argument(parser)


def handle(args: argparse.Namespace, app) -> List[str]:
    sample_config = IsotropicSampleConfig(dimension=require_dimension(args), field=args.field,
                                          seed=args.seed, sample_count=args.count)
    samples = app.sphere_service.sample(sample_config)
    n = sample_config.dimension
    # one (re, im) column pair per component for both fields; real vectors carry zero imaginary parts
    header = ["index"] + [f"c{k}_{part}" for k in range(n) for part in ("re", "im")]
    flat = np.zeros((samples.shape[0], 2 * n))
    flat[:, 0::2] = samples.real
    if sample_config.field is Field.COMPLEX:
        flat[:, 1::2] = samples.imag
        second = float(np.mean(np.abs(samples) ** 2))
        logger.info(f"Mean |z_k|^2 = {second:.6g} (expected {complex_moment(n, 2):.6g}).")
    else:
        second = float(np.mean(samples ** 2))
        logger.info(f"Mean x_k^2 = {second:.6g} (expected {moment(n, 2):.6g}).")
    rows = ([index] + values.tolist() for index, values in enumerate(flat))
    return [write_csv(args.out, header, rows)]


COMMAND = Command(
    name="sample-sphere",
    help="Draw isotropic unit vectors of R^n or C^N.",
    add_arguments=add_arguments,
    handler=handle,
)
