# src/services/estimator_service.py
# Estimators for the environment reflection coefficient, port norms and predicted coupling variances.

from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.cli.errors import DomainError, IndexRangeError, InsufficientDataError, InvalidDimensionError, ValidationError
from src.domain.estimator import CouplingEstimate, PortModelType, PortNormModel
from src.domain.network import SweepDataset
from src.utils.logger import logger
from src.utils.statistics import complex_variance, jackknife_standard_error, leave_one_out_variances

CONFIDENCE_Z = 1.96


def _require_nonnegative(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0.0:
        raise DomainError(f"{name} must be a non-negative number, got {value!r}.")
    return value


def _require_dimension(N: Optional[int]) -> Optional[int]:
    if N is None:
        return None
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise InvalidDimensionError(f"N must be a positive integer, got {N!r}.", flag="--dim")
    return int(N)


def _samples(values) -> np.ndarray:
    z = np.asarray(values, dtype=complex).ravel()
    if z.size < 2:
        raise InsufficientDataError(f"Estimating rho needs at least 2 samples, got {z.size}.")
    return z


def estimate_rho(reference_s12_samples: Sequence[complex]) -> float:
    """
    rho_hat = sqrt(complex sample variance of S_12), assuming perfectly adapted lossless
    reference antennas (||L_1|| = ||L_2|| = 1). The value still carries the 1/sqrt(N) factor.

    Raises:
        InsufficientDataError: With fewer than 2 samples.
    """
    return float(np.sqrt(complex_variance(_samples(reference_s12_samples))))


def rho_half_width(samples: Sequence[complex], z: float = CONFIDENCE_Z) -> float:
    """Jackknife confidence half-width of sqrt(var) over the samples; NaN below 3 samples."""
    values = _samples(samples)
    if values.size < 3:
        return float("nan")
    replicates = np.sqrt(np.maximum(leave_one_out_variances(values), 0.0))
    return float(z * jackknife_standard_error(replicates))


def port_norm(model: PortNormModel) -> float:
    """
    ||L_p||^2 for a port model: R_rad (Thevenin), G_rad (Norton) or (1 - |S_pp|^2) C (scattering).
    """
    if model.model_type is PortModelType.THEVENIN:
        return float(model.radiation_resistance)
    if model.model_type is PortModelType.NORTON:
        return float(model.radiation_conductance)
    return float((1.0 - abs(complex(model.reflection)) ** 2) * model.efficiency)


def predict_cross_variance(var_pp: float, var_qq: float) -> float:
    """
    sqrt(var_pp var_qq) / 2: the transmission variance the reflection variances predict.

    Raises:
        DomainError: If an input is negative.
    """
    a = _require_nonnegative(var_pp, "var_pp")
    b = _require_nonnegative(var_qq, "var_qq")
    return 0.5 * float(np.sqrt(a * b))


def predict_coupling_variance(norm_sq_p: float, norm_sq_q: float, rho: float, N: int) -> float:
    """var(S_pq) = ||L_p||^2 ||L_q||^2 rho^2 / N."""
    N = _require_dimension(N)
    return _require_nonnegative(norm_sq_p, "norm_sq_p") * _require_nonnegative(norm_sq_q, "norm_sq_q") \
        * _require_nonnegative(rho, "rho") ** 2 / N


def port_norm_from_reflection_variance(var_pp: float, rho: float, N: int) -> float:
    """
    ||L_p||^2 from a port's own reflection statistics, inverting var(S_pp) = 2 ||L_p||^4 rho^2 / N.

    Raises:
        DomainError: If var_pp is negative or rho is not positive.
    """
    N = _require_dimension(N)
    var_pp = _require_nonnegative(var_pp, "var_pp")
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho!r}.", flag="--rho")
    return float(np.sqrt(var_pp * N / (2.0 * rho ** 2)))


def estimate_rho_from_reference(s12_samples: Sequence[complex], port_1: PortNormModel, port_2: PortNormModel,
                                N: Optional[int] = None) -> CouplingEstimate:
    """
    rho_hat^2 = var(S_12) / (||L_1||^2 ||L_2||^2) for reference antennas of known
    mismatch and efficiency. With N supplied, also the N-normalised estimate.

    Raises:
        InsufficientDataError: With fewer than 2 samples.
        DomainError: If a reference port radiates nothing (||L_p|| = 0).
    """
    N = _require_dimension(N)
    values = _samples(s12_samples)
    n1, n2 = port_norm(port_1), port_norm(port_2)
    if n1 <= 0.0 or n2 <= 0.0:
        raise DomainError("Reference ports must have a positive norm; a fully mismatched port radiates nothing.")
    scale = 1.0 / np.sqrt(n1 * n2)
    var_12 = float(complex_variance(values))
    rho_hat = float(np.sqrt(var_12) * scale)
    return CouplingEstimate(
        rho_hat=rho_hat,
        rho_half_width=rho_half_width(values) * scale,
        predicted_cross_variance=float("nan"),
        empirical_cross_variance=var_12,
        rho_hat_normalized=rho_hat * np.sqrt(N) if N is not None else None,
        sample_count=int(values.size),
    )


class EstimatorService:
    """Applies the estimators frequency by frequency to a stirred sweep."""

    def __init__(self, reference_ports: Optional[Tuple[PortNormModel, PortNormModel]] = None):
        self.reference_ports = reference_ports or (PortNormModel.matched_lossless(), PortNormModel.matched_lossless())
        logger.debug("EstimatorService initialized.")

    def estimate_sweep(self, dataset: SweepDataset, ports: Tuple[int, int] = (1, 2), N: Optional[int] = None,
                       reference_ports: Optional[Tuple[PortNormModel, PortNormModel]] = None) -> List[CouplingEstimate]:
        """
        Per-frequency rho_hat from var(S_pq), per-port var(S_pp), var(S_qq), and the
        universal-ratio prediction for var(S_pq).

        ``reference_ports`` overrides the models given at construction for this call.

        Raises:
            InsufficientDataError: With fewer than 2 stir states.
            IndexRangeError: If a port is outside the dataset's port range.
            AlignmentError: If the stir states do not share a frequency grid.
        """
        if dataset.stir_count < 2:
            raise InsufficientDataError(f"Estimation needs at least 2 stir states, got {dataset.stir_count}.")
        p, q = ports
        P = dataset.port_count
        if p == q:
            raise ValidationError("Reference ports must differ.", flag="--ref-ports")
        if not (1 <= p <= P and 1 <= q <= P):
            raise IndexRangeError(f"Reference ports {ports} are outside [1, {P}].", flag="--ref-ports")
        models = reference_ports or self.reference_ports
        frequencies, data = dataset.stacked()
        logger.info(f"Estimating rho over {len(frequencies)} frequencies and {dataset.stir_count} stir states (ports {p},{q}).")
        estimates = []
        for f_index, frequency in enumerate(frequencies):
            cut = data[:, f_index]
            reference = estimate_rho_from_reference(cut[:, p - 1, q - 1], *models, N=N)
            var_pp = float(complex_variance(cut[:, p - 1, p - 1]))
            var_qq = float(complex_variance(cut[:, q - 1, q - 1]))
            estimates.append(CouplingEstimate(
                rho_hat=reference.rho_hat,
                rho_half_width=reference.rho_half_width,
                predicted_cross_variance=predict_cross_variance(var_pp, var_qq),
                empirical_cross_variance=reference.empirical_cross_variance,
                var_pp=var_pp,
                var_qq=var_qq,
                rho_hat_normalized=reference.rho_hat_normalized,
                frequency=float(frequency),
                sample_count=dataset.stir_count,
            ))
        if dataset.stir_count < 3:
            logger.warning("Only two stir states: rho confidence intervals are undefined.")
        return estimates
