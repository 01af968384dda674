# src/services/multiport_service.py
# Port-form generation, the perturbation map Delta A = L S L^T and ensemble variance tables.

from typing import Optional, Sequence, Tuple

import numpy as np

from src.cli.errors import (
    InfeasibleOrthogonalityError,
    InvalidDimensionError,
    ShapeError,
    ValidationError,
)
from src.domain.accumulator import ComplexAccumulator
from src.domain.ensemble import EnsembleKind, ScatteringMatrix, SieConfig
from src.domain.multiport import ModelType, Orthogonality, PerturbationMatrix, PortForms, VarianceTable
from src.services.ensemble_service import MIN_MOMENT_SAMPLES, draw_terms, exact_scale, sample_sie
from src.utils.logger import logger
from src.utils.parallel import ordered_map
from src.utils.statistics import grouped_jackknife
from src.utils.substreams import partition, sample_stream

GENERATION_MODES = ("full", "real_part", "degenerate")


def _orthonormalise(rows: np.ndarray, inner) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalisation pass."""
    basis = []
    for row in rows:
        r = row.copy()
        for _ in range(2):
            for e in basis:
                r = r - inner(r, e) * e
        norm = np.sqrt(inner(r, r).real)
        if norm <= 1e-300:
            raise InfeasibleOrthogonalityError("Gram-Schmidt met a linearly dependent row.")
        basis.append(r / norm)
    return np.array(basis)


def _hermitian(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.sum(a * np.conj(b)))


def _real_part(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sum(a.real * b.real + a.imag * b.imag))


def _check_norms(norms: Optional[Sequence[float]], P: int) -> np.ndarray:
    if norms is None:
        return np.ones(P)
    values = np.asarray(norms, dtype=float).ravel()
    if values.size != P:
        raise ValidationError(f"Expected {P} port norms, got {values.size}.", flag="--norms")
    if np.any(~np.isfinite(values)) or np.any(values <= 0.0):
        raise ValidationError("Port norms must be positive.", flag="--norms")
    return values


def make_orthogonal_port_forms(P: int, N: int, norms: Optional[Sequence[float]], rng: np.random.Generator,
                               mode: str = "full") -> PortForms:
    """
    Random port forms: Gram-Schmidt on i.i.d. complex Gaussian rows, rows scaled to ``norms``.

    ``mode="full"`` orthogonalises under the Hermitian inner product, ``"real_part"`` only
    makes Re<L_p, L_q> vanish, ``"degenerate"`` repeats one random direction in every row.

    Raises:
        InvalidDimensionError: If P or N is smaller than 1.
        InfeasibleOrthogonalityError: If P > N (P > 2N for real-part orthogonality).
    """
    if P < 1 or N < 1:
        raise InvalidDimensionError(f"Need P >= 1 and N >= 1, got P={P}, N={N}.", flag="--ports")
    if mode not in GENERATION_MODES:
        raise ValidationError(f"Unknown port-form mode {mode!r}; expected one of {', '.join(GENERATION_MODES)}.",
                              flag="--orthogonality")
    scale = _check_norms(norms, P)
    capacity = 2 * N if mode == "real_part" else N
    if mode != "degenerate" and P > capacity:
        raise InfeasibleOrthogonalityError(f"{P} orthogonal port forms do not fit in wave dimension {N}.", flag="--ports")

    g = rng.standard_normal((P, N, 2))
    rows = g[..., 0] + 1j * g[..., 1]
    if mode == "full":
        unit = _orthonormalise(rows, _hermitian)
        orthogonality = Orthogonality.FULL
    elif mode == "real_part":
        unit = _orthonormalise(rows, _real_part)
        orthogonality = Orthogonality.REAL_PART
    else:
        first = rows[0] / np.linalg.norm(rows[0])
        unit = np.tile(first, (P, 1))
        orthogonality = Orthogonality.NONE
    logger.debug(f"Generated {P} port forms in dimension {N} ({mode}).")
    return PortForms(unit * scale[:, None], orthogonality)


def perturb(L: PortForms, S: ScatteringMatrix, model_type: ModelType = ModelType.SCATTERING) -> PerturbationMatrix:
    """
    Delta A_pq = sum_kl L_pk S_kl L_ql, i.e. L S L^T (plain transpose on the right factor).

    Raises:
        ShapeError: If L.wave_dim differs from S.dimension.
    """
    if L.wave_dim != S.dimension:
        raise ShapeError(f"Port forms act on dimension {L.wave_dim}, scattering matrix has {S.dimension}.")
    forms = L.entries
    return PerturbationMatrix(forms @ S.entries @ forms.T, model_type)


def perturb_terms(L: PortForms, rows: np.ndarray, multipliers: np.ndarray) -> np.ndarray:
    """
    Delta A for S = sum_lambda s_lambda v_lambda v_lambda^T without forming S:
    W = V L^T holds (L v_lambda)_p and Delta A = W^T diag(s) W.
    """
    w = rows @ L.entries.T
    return w.T @ (multipliers[:, None] * w)


def draw_perturbation(L: PortForms, config: SieConfig, rng: np.random.Generator) -> np.ndarray:
    """Delta A for one SIE draw; the same S that ``sample_sie`` returns for this generator."""
    if config.ensemble is EnsembleKind.CIRCULAR_ORTHOGONAL:
        return perturb(L, sample_sie(config, rng)).entries
    rows, s = draw_terms(config, rng)
    return perturb_terms(L, rows, s)


def predicted_variances(L: PortForms, config: SieConfig) -> Tuple[np.ndarray, np.ndarray]:
    """
    Large-N and finite-N variance tables for orthogonal forms:
    ||L_p||^2 ||L_q||^2 rho^2 (1 + d_pq) times 1/N, respectively times the exact scale.
    """
    sq = L.row_norms ** 2
    pattern = np.outer(sq, sq) * (1.0 + np.eye(L.port_count)) * config.rho ** 2
    return pattern / config.dimension, pattern * exact_scale(config)


class MultiportService:
    """Ensemble statistics of the port-level perturbation over SIE draws."""

    def __init__(self, workers: Optional[int] = None, group_count: int = 32, batch_size: int = 256):
        self.workers = workers
        self.group_count = group_count
        self.batch_size = batch_size
        logger.debug("MultiportService initialized.")

    @staticmethod
    def draw(L: PortForms, config: SieConfig, seed: int, index: int) -> np.ndarray:
        """Delta A for sample ``index``."""
        return draw_perturbation(L, config, sample_stream(seed, index))

    def ensemble_variance(self, L: PortForms, config: SieConfig, sample_count: int, seed: int) -> VarianceTable:
        """
        Streaming complex variances of every Delta A_pq over ``sample_count`` SIE draws.

        Raises:
            ShapeError: If L.wave_dim differs from the ensemble dimension.
            ValidationError: If sample_count < 100.
        """
        if L.wave_dim != config.dimension:
            raise ShapeError(f"Port forms act on dimension {L.wave_dim}, ensemble has {config.dimension}.")
        if sample_count < MIN_MOMENT_SAMPLES:
            raise ValidationError(f"ensemble_variance needs at least {MIN_MOMENT_SAMPLES} samples, got {sample_count}.",
                                  flag="--count")
        P = L.port_count
        logger.info(f"Perturbation ensemble: P={P}, N={config.dimension}, rho={config.rho}, M={sample_count}, seed={seed}.")

        def run_group(bounds: Tuple[int, int]) -> ComplexAccumulator:
            lo, hi = bounds
            acc = ComplexAccumulator((P, P))
            for start in range(lo, hi, self.batch_size):
                stop = min(hi, start + self.batch_size)
                acc.push_batch(np.stack([self.draw(L, config, seed, i) for i in range(start, stop)]))
            return acc

        groups = ordered_map(run_group, partition(sample_count, self.group_count), self.workers)
        variances, standard_errors = grouped_jackknife(groups, lambda acc: acc.variance())
        # Delta A is symmetric, so the table is symmetrised to remove rounding asymmetry
        variances = 0.5 * (variances + variances.T)
        predicted, predicted_exact = predicted_variances(L, config)
        if L.orthogonality is not Orthogonality.FULL:
            logger.warning("Port forms are not fully orthogonal; closed-form predictions do not apply.")
        return VarianceTable(
            variances=variances,
            predicted=predicted,
            predicted_exact=predicted_exact,
            standard_errors=np.asarray(standard_errors, dtype=float),
            sample_count=sample_count,
        )


def universal_ratio_residual(table: VarianceTable, p: int, q: int) -> float:
    """Relative residual of var(A_pq) = sqrt(var(A_pp) var(A_qq)) / 2 (1-based ports)."""
    return table.universal_ratio_residual(p, q)
