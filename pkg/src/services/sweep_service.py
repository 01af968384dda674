# src/services/sweep_service.py
# Per-frequency variance curves across stir states and synthetic stirred sweeps.

from dataclasses import replace
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from src.cli.errors import ConfigurationError, IndexRangeError, InsufficientDataError, ShapeError, ValidationError
from src.domain.ensemble import SieConfig
from src.domain.multiport import PortForms
from src.domain.network import NetworkRecord, SweepDataset, VarianceCurve, VarianceRow, flag_low_confidence
from src.services.multiport_service import draw_perturbation
from src.utils.logger import logger
from src.utils.parallel import ordered_map
from src.utils.statistics import complex_variance
from src.utils.substreams import sample_stream

RhoProfile = Callable[[np.ndarray], np.ndarray]


# --- rho(f) profiles ---

def constant_profile(rho: float) -> RhoProfile:
    return lambda grid: np.full(np.shape(grid), float(rho))


def ramp_profile(rho_start: float, rho_end: float) -> RhoProfile:
    """rho rising (or falling) linearly from the first to the last grid frequency."""
    def profile(grid: np.ndarray) -> np.ndarray:
        f = np.asarray(grid, dtype=float)
        if f.size < 2 or f[-1] == f[0]:
            return np.full(f.shape, float(rho_start))
        return rho_start + (rho_end - rho_start) * (f - f[0]) / (f[-1] - f[0])
    return profile


def resolve_profile(profile: Union[None, float, RhoProfile], config: SieConfig) -> RhoProfile:
    if profile is None:
        return constant_profile(config.rho)
    if callable(profile):
        return profile
    return constant_profile(float(profile))


def frequency_grid(count: int, start: float = 1e9, stop: float = 6e9) -> np.ndarray:
    """``count`` equally spaced frequencies in hertz."""
    if count < 1:
        raise ValidationError(f"Need at least one frequency, got {count}.", flag="--freqs")
    if not (0.0 < start <= stop):
        raise ValidationError(f"Need 0 < f_start <= f_stop, got {start!r}, {stop!r}.", flag="--f-start")
    if count == 1:
        return np.array([float(start)])
    return np.linspace(start, stop, count)


# --- Variance curves ---

def variance_curve(dataset: SweepDataset, ports: Tuple[int, int] = (1, 2)) -> VarianceCurve:
    """
    Unbiased complex variances of S_pp, S_qq and S_pq across stir states at every frequency,
    with the prediction sqrt(var(S_pp) var(S_qq)) / 2 and its relative residual. Rows computed
    from fewer than 3 stir states are flagged low-confidence.

    Raises:
        InsufficientDataError: With fewer than 2 stir states.
        AlignmentError: If the stir states do not share a frequency grid.
        IndexRangeError: If a port is outside the dataset's port range.
    """
    if dataset.stir_count < 2:
        raise InsufficientDataError(f"Variance curves need at least 2 stir states, got {dataset.stir_count}.")
    p, q = ports
    P = dataset.port_count
    if p == q:
        raise ValidationError("The variance curve needs two distinct ports.", flag="--ports")
    if not (1 <= p <= P and 1 <= q <= P):
        raise IndexRangeError(f"Ports {ports} are outside [1, {P}].", flag="--ports")
    frequencies, data = dataset.stacked()
    low = flag_low_confidence(dataset.stir_count)
    if low:
        logger.warning(f"Variance curve from only {dataset.stir_count} stir states; results are low-confidence.")
    rows = []
    if frequencies.size:
        var_pp = complex_variance(data[:, :, p - 1, p - 1])
        var_qq = complex_variance(data[:, :, q - 1, q - 1])
        var_pq = complex_variance(data[:, :, p - 1, q - 1])
        predicted = 0.5 * np.sqrt(var_pp * var_qq)
        for i, f in enumerate(frequencies):
            residual = abs(var_pq[i] - predicted[i]) / var_pq[i] if var_pq[i] > 0.0 else float("nan")
            rows.append(VarianceRow(float(f), float(var_pp[i]), float(var_qq[i]), float(var_pq[i]),
                                    float(predicted[i]), float(residual), low))
    logger.info(f"Variance curve over {len(rows)} frequencies and {dataset.stir_count} stir states.")
    return VarianceCurve(rows=rows, ports=(p, q), stir_count=dataset.stir_count)


# --- Synthetic sweeps ---

class SweepService:
    """Generates stirred sweeps from the SIE model, one independent draw per (stir, frequency)."""

    def __init__(self, workers: Optional[int] = None, reference_impedance: float = 50.0):
        self.workers = workers
        self.reference_impedance = reference_impedance
        logger.debug("SweepService initialized.")

    def synthesize_sweep(self, config: SieConfig, L: PortForms, stir_count: int, freq_grid: Sequence[float],
                         seed: int, rho_profile: Union[None, float, RhoProfile] = None) -> SweepDataset:
        """
        S-parameters A0 + Delta A with A0 = 0 for every stir state and frequency; the draw for
        (stir s, frequency j) comes from substream (seed, s, j). ``rho_profile`` gives rho per
        frequency (constant ``config.rho`` by default).

        Raises:
            ValidationError: For a non-positive stir count or an invalid grid.
            ShapeError: If L does not act on the ensemble dimension.
            ConfigurationError: If the profile leaves (0, 1].
        """
        if stir_count < 1:
            raise ValidationError(f"Need at least one stir state, got {stir_count}.", flag="--stirs")
        if L.wave_dim != config.dimension:
            raise ShapeError(f"Port forms act on dimension {L.wave_dim}, ensemble has {config.dimension}.")
        grid = np.asarray(freq_grid, dtype=float)
        if grid.ndim != 1 or np.any(grid <= 0.0) or np.any(np.diff(grid) <= 0.0):
            raise ValidationError("The frequency grid must be positive and strictly increasing.", flag="--freqs")
        rhos = np.asarray(resolve_profile(rho_profile, config)(grid), dtype=float)
        if rhos.shape != grid.shape:
            raise ConfigurationError("The rho profile must return one value per frequency.", flag="--rho")
        configs = [replace(config, rho=float(r)) for r in rhos]
        logger.info(f"Synthesizing {stir_count} stir states x {grid.size} frequencies (N={config.dimension}, seed={seed}).")

        def run_stir(stir: int):
            return [NetworkRecord(float(f), draw_perturbation(L, configs[j], sample_stream(seed, stir, j)),
                                  self.reference_impedance)
                    for j, f in enumerate(grid)]

        sweeps = ordered_map(run_stir, range(stir_count), self.workers)
        metadata = {"dimension": config.dimension, "seed": seed, "rho": rhos.tolist(), "ports": L.port_count}
        return SweepDataset(stir_states=sweeps, metadata=metadata)
