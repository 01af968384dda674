# src/services/ensemble_service.py
# Generation of spectrally isotropic stochastic scattering matrices and Monte Carlo moment checks.

from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.cli.errors import (
    DegenerateEnsembleError,
    IndexRangeError,
    InvalidDimensionError,
    ShapeError,
    ValidationError,
)
from src.domain.accumulator import ComplexAccumulator, CovarianceAccumulator
from src.domain.ensemble import (
    EigenvalueDistribution,
    EnsembleKind,
    MomentEntry,
    MomentReport,
    Quadruple,
    ScatteringMatrix,
    SieConfig,
    VectorMode,
)
from src.services.sphere_service import complex_unit_rows
from src.utils.logger import logger
from src.utils.parallel import ordered_map
from src.utils.statistics import grouped_jackknife, merge_all
from src.utils.substreams import partition, sample_stream

MIN_MOMENT_SAMPLES = 100


# --- Random building blocks ---

def haar_unitary(rng: np.random.Generator, N: int) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R's diagonal removed."""
    g = rng.standard_normal((N, N, 2))
    q, r = np.linalg.qr(g[..., 0] + 1j * g[..., 1])
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def draw_multipliers(config: SieConfig, rng: np.random.Generator, count: int) -> np.ndarray:
    """Zero-mean spectral multipliers with E|s|^2 = rho^2."""
    if config.eigenvalue_dist is EigenvalueDistribution.COMPLEX_GAUSSIAN:
        g = rng.standard_normal((count, 2))
        return config.rho * (g[:, 0] + 1j * g[:, 1]) / np.sqrt(2.0)
    return config.rho * np.exp(2j * np.pi * rng.random(count))


def draw_terms(config: SieConfig, rng: np.random.Generator,
               vectors: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rank-one term data of one SIE draw: a (K, N) array whose rows are the vectors v_lambda
    and the K multipliers s_lambda. Vectors are drawn before multipliers.
    """
    N, K = config.dimension, config.term_count
    if vectors is not None:
        rows = np.asarray(vectors, dtype=complex)
        if rows.shape != (K, N):
            raise ShapeError(f"Fixed vectors must have shape ({K}, {N}), got {rows.shape}.")
    elif config.vector_mode is VectorMode.ORTHONORMAL_FRAME:
        rows = haar_unitary(rng, N)[:, :K].T
    else:
        rows = complex_unit_rows(rng, K, N)
    return rows, draw_multipliers(config, rng, K)


def _mirror_upper(matrix: np.ndarray) -> np.ndarray:
    """Copies the strict upper triangle onto the lower one so the result is exactly symmetric."""
    lower = np.tril_indices(matrix.shape[0], -1)
    matrix[lower] = matrix.T[lower]
    return matrix


def sample_sie(config: SieConfig, rng: np.random.Generator, vectors: Optional[np.ndarray] = None) -> ScatteringMatrix:
    """
    One draw of S = sum_lambda s_lambda v_lambda v_lambda^T (plain transpose, no conjugation).

    ``vectors`` fixes the rank-one directions (rows), leaving only the multipliers random.
    The circular-orthogonal comparison ensemble returns rho * U^T U with U Haar-unitary.
    """
    if config.ensemble is EnsembleKind.CIRCULAR_ORTHOGONAL:
        u = haar_unitary(rng, config.dimension)
        return ScatteringMatrix(_mirror_upper(config.rho * (u.T @ u)))
    rows, s = draw_terms(config, rng, vectors)
    return ScatteringMatrix(_mirror_upper(rows.T @ (s[:, None] * rows)))


def sample_entries(config: SieConfig, rng: np.random.Generator, pairs: Sequence[Tuple[int, int]]) -> np.ndarray:
    """
    Selected entries S_kl (0-based pairs) of one draw without forming the whole matrix.
    Uses the same random draws as ``sample_sie``.
    """
    idx = np.asarray(pairs, dtype=int).reshape(-1, 2)
    if config.ensemble is EnsembleKind.CIRCULAR_ORTHOGONAL:
        return sample_sie(config, rng).entries[idx[:, 0], idx[:, 1]]
    rows, s = draw_terms(config, rng)
    return np.sum(s[:, None] * rows[:, idx[:, 0]] * rows[:, idx[:, 1]], axis=0)


# --- Closed-form predictions ---

def _delta_pattern(quadruple: Quadruple) -> int:
    k, l, m, n = quadruple
    return int(k == m and l == n) + int(k == n and l == m)


def predicted_second_moment(config: SieConfig, quadruple: Quadruple) -> float:
    """Large-N prediction (d_km d_ln + d_kn d_lm) rho^2 / N."""
    return _delta_pattern(quadruple) * config.rho ** 2 / config.dimension


def exact_scale(config: SieConfig) -> float:
    """
    Finite-N factor c with E(S_kl conj(S_mn)) = c rho^2 (d_km d_ln + d_kn d_lm):
    K / (N (N+1)) for rank-one sums, 1 / (N+1) for the circular orthogonal ensemble.
    """
    N = config.dimension
    if config.ensemble is EnsembleKind.CIRCULAR_ORTHOGONAL:
        return 1.0 / (N + 1)
    return config.term_count / (N * (N + 1))


def exact_second_moment(config: SieConfig, quadruple: Quadruple) -> float:
    """Finite-N value of E(S_kl conj(S_mn)) for the construction in use."""
    return _delta_pattern(quadruple) * config.rho ** 2 * exact_scale(config)


def predicted_variances(config: SieConfig) -> np.ndarray:
    """var(S_pq) = (d_pq + 1) rho^2 / N for every entry."""
    N = config.dimension
    return (np.eye(N) + 1.0) * config.rho ** 2 / N


def _validate_quadruples(quadruples: Sequence[Sequence[int]], N: int) -> List[Quadruple]:
    checked = []
    for quad in quadruples:
        if len(quad) != 4:
            raise ValidationError(f"Index quadruple {tuple(quad)} must have four entries.", flag="--quadruples")
        if any(not 1 <= int(i) <= N for i in quad):
            raise IndexRangeError(f"Index quadruple {tuple(quad)} is outside [1, {N}].", flag="--quadruples")
        checked.append(tuple(int(i) for i in quad))
    return checked


# --- Ensemble service ---

class EnsembleService:
    """
    Monte Carlo ensembles of SIE scattering matrices.

    Sample i is always drawn from substream (seed, i). Samples are split into fixed
    contiguous groups whose accumulators are merged in group order, so every
    result is independent of the worker count; the groups double as jackknife blocks.
    """

    def __init__(self, workers: Optional[int] = None, group_count: int = 32, batch_size: int = 256):
        self.workers = workers
        self.group_count = group_count
        self.batch_size = batch_size
        logger.debug("EnsembleService initialized.")

    def _batches(self, lo: int, hi: int):
        for start in range(lo, hi, self.batch_size):
            yield start, min(hi, start + self.batch_size)

    def generate(self, config: SieConfig, sample_count: int, seed: int) -> np.ndarray:
        """All samples as an (M, N, N) array."""
        logger.info(f"Generating {sample_count} SIE matrices (N={config.dimension}, rho={config.rho}, seed={seed}).")

        def run_group(bounds: Tuple[int, int]) -> np.ndarray:
            lo, hi = bounds
            return np.stack([sample_sie(config, sample_stream(seed, i)).entries for i in range(lo, hi)])

        return np.concatenate(ordered_map(run_group, partition(sample_count, self.group_count), self.workers), axis=0)

    def empirical_moments(self, config: SieConfig, sample_count: int,
                          quadruples: Sequence[Sequence[int]], seed: int) -> MomentReport:
        """
        Streaming means, entry variances and E(S_kl conj(S_mn)) for the given 1-based quadruples.

        Raises:
            ValidationError: If sample_count < 100.
            IndexRangeError: If an index is outside [1, N].
        """
        if sample_count < MIN_MOMENT_SAMPLES:
            raise ValidationError(f"empirical_moments needs at least {MIN_MOMENT_SAMPLES} samples, got {sample_count}.", flag="--count")
        quads = _validate_quadruples(quadruples, config.dimension)
        logger.info(f"Estimating {len(quads)} second moments over {sample_count} SIE samples (N={config.dimension}).")

        def run_group(bounds: Tuple[int, int]):
            lo, hi = bounds
            entries = ComplexAccumulator((config.dimension, config.dimension))
            pairs = CovarianceAccumulator((len(quads),))
            for start, stop in self._batches(lo, hi):
                stack = np.stack([sample_sie(config, sample_stream(seed, i)).entries for i in range(start, stop)])
                self._push(entries, pairs, stack, quads)
            return entries, pairs

        groups = ordered_map(run_group, partition(sample_count, self.group_count), self.workers)
        return self._report(config, quads, groups)

    def moments_from_samples(self, config: SieConfig, samples: np.ndarray,
                             quadruples: Sequence[Sequence[int]]) -> MomentReport:
        """Same report as ``empirical_moments`` for a stored (M, N, N) ensemble."""
        samples = np.asarray(samples, dtype=complex)
        if samples.ndim != 3 or samples.shape[1:] != (config.dimension, config.dimension):
            raise ShapeError(f"Expected samples of shape (M, {config.dimension}, {config.dimension}), got {samples.shape}.")
        if samples.shape[0] < MIN_MOMENT_SAMPLES:
            raise ValidationError(f"Moments need at least {MIN_MOMENT_SAMPLES} samples, got {samples.shape[0]}.", flag="--in")
        quads = _validate_quadruples(quadruples, config.dimension)
        groups = []
        for lo, hi in partition(samples.shape[0], self.group_count):
            entries = ComplexAccumulator((config.dimension, config.dimension))
            pairs = CovarianceAccumulator((len(quads),))
            for start, stop in self._batches(lo, hi):
                self._push(entries, pairs, samples[start:stop], quads)
            groups.append((entries, pairs))
        return self._report(config, quads, groups)

    @staticmethod
    def _push(entries: ComplexAccumulator, pairs: CovarianceAccumulator, stack: np.ndarray, quads: List[Quadruple]) -> None:
        entries.push_batch(stack)
        if quads:
            q = np.asarray(quads) - 1
            pairs.push_batch(stack[:, q[:, 0], q[:, 1]], stack[:, q[:, 2], q[:, 3]])

    @staticmethod
    def _report(config: SieConfig, quads: List[Quadruple], groups) -> MomentReport:
        entry_groups = [g[0] for g in groups]
        pair_groups = [g[1] for g in groups]
        merged = merge_all(entry_groups)
        variances, variance_se = grouped_jackknife(entry_groups, lambda acc: acc.variance())
        items = []
        if quads:
            covariances, covariance_se = grouped_jackknife(pair_groups, lambda acc: acc.covariance())
            for i, quad in enumerate(quads):
                items.append(MomentEntry(
                    quadruple=quad,
                    empirical=complex(covariances[i]),
                    predicted=predicted_second_moment(config, quad),
                    predicted_exact=exact_second_moment(config, quad),
                    standard_error=float(covariance_se[i]),
                ))
        logger.debug(f"Moment report built from {merged.count} samples in {len(groups)} groups.")
        return MomentReport(
            mean_matrix=merged.mean,
            variances=np.asarray(variances, dtype=float),
            variance_standard_errors=np.asarray(variance_se, dtype=float),
            entries=items,
            sample_count=merged.count,
        )

    def variance_ratio_with_error(self, config: SieConfig, sample_count: int, seed: int) -> Tuple[float, float]:
        """
        Empirical var(S_11)/var(S_12) and its jackknife standard error.

        Raises:
            InvalidDimensionError: If N < 2 (no off-diagonal entry).
            DegenerateEnsembleError: If var(S_12) vanishes.
        """
        if config.dimension < 2:
            raise InvalidDimensionError("The variance ratio needs N >= 2.", flag="--dim")
        pairs = [(0, 0), (0, 1)]

        def run_group(bounds: Tuple[int, int]) -> ComplexAccumulator:
            lo, hi = bounds
            acc = ComplexAccumulator((2,))
            for start, stop in self._batches(lo, hi):
                acc.push_batch(np.stack([sample_entries(config, sample_stream(seed, i), pairs) for i in range(start, stop)]))
            return acc

        groups = ordered_map(run_group, partition(sample_count, self.group_count), self.workers)
        merged = merge_all(groups)
        if merged.count < 2:
            raise ValidationError("The variance ratio needs at least 2 samples.", flag="--count")
        var = merged.variance()
        if var[1] <= 0.0:
            raise DegenerateEnsembleError("var(S_12) is zero; the ratio is undefined.")
        ratio = float(var[0] / var[1])
        # every leave-one-group-out replicate needs 2 samples for a variance
        if len(groups) < 2 or min(merged.count - g.count for g in groups) < 2:
            return ratio, float("nan")
        _, se = grouped_jackknife(groups, lambda acc: acc.variance()[0] / acc.variance()[1])
        return ratio, float(se)

    def variance_ratio(self, config: SieConfig, sample_count: int, seed: int) -> float:
        """Empirical var(S_11)/var(S_12) with var(z) = E|z - Ez|^2."""
        return self.variance_ratio_with_error(config, sample_count, seed)[0]
