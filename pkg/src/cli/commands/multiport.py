# src/cli/commands/multiport.py
# perturb and variance-check: port-level perturbation statistics and the universal variance ratio.

import argparse
from typing import List

from src.artifacts import write_csv
from src.cli.commands.common import Command, add_ensemble_arguments, ensemble_config, float_list
from src.domain.multiport import ModelType, VarianceTable
from src.services.multiport_service import GENERATION_MODES, make_orthogonal_port_forms
from src.utils.logger import logger
from src.utils.substreams import master_stream

PORT_FORM_STREAM = 0

PERTURB_HEADER = ["p", "q", "var_empirical", "stderr", "var_predicted", "var_predicted_exact", "rel_error",
                  "ratio_residual"]
CHECK_HEADER = ["p", "q", "var_pq", "var_pp", "var_qq", "predicted_var_pq", "residual", "within_tolerance"]


def _add_port_arguments(parser: argparse.ArgumentParser, fixed_ports: bool) -> None:
    add_ensemble_arguments(parser, count_default=100000 if fixed_ports else 10000)
    if not fixed_ports:
        parser.add_argument("--ports", type=int, default=2, help="Number of ports P (P <= N).")
        parser.add_argument("--norms", type=float_list, default=None, help="Comma-separated row norms ||L_p||.")
        parser.add_argument("--model-type", choices=[m.value for m in ModelType], default=ModelType.SCATTERING.value,
                            help="Model the perturbation refers to (reporting only).")
    parser.add_argument("--orthogonality", choices=list(GENERATION_MODES), default="full",
                        help="Port-form generation: full, real_part or degenerate (L_2 = L_1).")


def _variance_table(args: argparse.Namespace, app, ports: int, norms) -> VarianceTable:
    sie = ensemble_config(args)
    forms = make_orthogonal_port_forms(ports, sie.dimension, norms, master_stream(args.seed, PORT_FORM_STREAM),
                                       mode=args.orthogonality)
    return app.multiport_service.ensemble_variance(forms, sie, args.count, args.seed)


# --- perturb ---

def add_perturb_arguments(parser: argparse.ArgumentParser) -> None:
    _add_port_arguments(parser, fixed_ports=False)


def handle_perturb(args: argparse.Namespace, app) -> List[str]:
    table = _variance_table(args, app, args.ports, args.norms)
    units = ModelType(args.model_type).units
    logger.info(f"Variance table for {table.port_count} ports (model {args.model_type}, units {units}^2).")
    rows = []
    for i in range(table.port_count):
        for j in range(i, table.port_count):
            predicted = table.predicted[i, j]
            residual = table.universal_ratio_residual(i + 1, j + 1) if i != j and table.variances[i, j] > 0 else None
            rows.append([i + 1, j + 1, table.variances[i, j], table.standard_errors[i, j], predicted,
                         table.predicted_exact[i, j], abs(table.variances[i, j] - predicted) / predicted, residual])
    return [write_csv(args.out, PERTURB_HEADER, rows)]


# --- variance-check ---

def add_check_arguments(parser: argparse.ArgumentParser) -> None:
    _add_port_arguments(parser, fixed_ports=True)
    parser.add_argument("--tolerance", type=float, default=0.05, help="Acceptance bound on the relative residual.")


def handle_check(args: argparse.Namespace, app) -> List[str]:
    table = _variance_table(args, app, 2, None)
    residual = table.universal_ratio_residual(1, 2)
    var = table.variances
    predicted = 0.5 * (var[0, 0] * var[1, 1]) ** 0.5
    within = residual <= args.tolerance
    log = logger.info if within else logger.warning
    log(f"Universal ratio residual {residual:.4g} ({'within' if within else 'outside'} tolerance {args.tolerance}).")
    rows = [[1, 2, var[0, 1], var[0, 0], var[1, 1], predicted, residual, within]]
    return [write_csv(args.out, CHECK_HEADER, rows)]


PERTURB_COMMAND = Command(
    name="perturb",
    help="Variance table of Delta A = L S L^T over an SIE ensemble.",
    add_arguments=add_perturb_arguments,
    handler=handle_perturb,
)

CHECK_COMMAND = Command(
    name="variance-check",
    help="Two-port check of var(A_12) = sqrt(var(A_11) var(A_22)) / 2.",
    add_arguments=add_check_arguments,
    handler=handle_check,
)
