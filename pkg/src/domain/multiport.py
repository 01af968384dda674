# src/domain/multiport.py
# Defines data models for port-bound linear forms, model-parameter perturbations and their variance tables.

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from src.cli.errors import ConfigurationError, DegenerateEnsembleError, IndexRangeError, ShapeError, ValidationError

ORTHOGONALITY_TOLERANCE = 1e-10


class Orthogonality(str, Enum):
    """Which inner product the rows of a port-form matrix are orthogonal under."""
    FULL = "full"
    REAL_PART = "real_part"
    NONE = "none"


class ModelType(str, Enum):
    """Network model the perturbation refers to; only the reporting units depend on it."""
    IMPEDANCE = "Z"
    ADMITTANCE = "Y"
    HYBRID = "H"
    SCATTERING = "S"

    @property
    def units(self) -> str:
        return {"Z": "ohm", "Y": "siemens", "H": "mixed", "S": "1"}[self.value]


def gram_matrix(entries: np.ndarray) -> np.ndarray:
    """Hermitian inner products <L_p, L_q> = sum_k L_pk conj(L_qk)."""
    return entries @ entries.conj().T


@dataclass(frozen=True, eq=False)
class PortForms:
    """
    P x N matrix whose row p maps incident-wave coefficients to the response of port p.

    With ``orthogonality=FULL`` the rows must be orthogonal under the Hermitian inner
    product; ``REAL_PART`` only requires the real part of it to vanish; ``NONE`` accepts
    any rows (used for the non-orthogonal control runs).
    """
    entries: np.ndarray
    orthogonality: Orthogonality = Orthogonality.FULL

    def __post_init__(self):
        L = np.asarray(self.entries, dtype=complex)
        if L.ndim != 2 or L.shape[0] < 1 or L.shape[1] < 1:
            raise ShapeError(f"Port forms must be a non-empty P x N matrix, got shape {L.shape}.")
        object.__setattr__(self, "entries", L)
        try:
            object.__setattr__(self, "orthogonality", Orthogonality(self.orthogonality))
        except ValueError as e:
            raise ConfigurationError(f"Unknown orthogonality mode {self.orthogonality!r}.", flag="--orthogonality") from e
        if np.any(self.row_norms <= 0.0):
            raise ValidationError("Every port form must have a positive norm.", flag="--norms")
        if self.orthogonality is not Orthogonality.NONE and self.row_orthogonality_defect() > ORTHOGONALITY_TOLERANCE:
            raise ValidationError(
                f"Port forms are not {self.orthogonality.value}-orthogonal "
                f"(defect {self.row_orthogonality_defect():.3e}).")

    @property
    def port_count(self) -> int:
        return int(self.entries.shape[0])

    @property
    def wave_dim(self) -> int:
        return int(self.entries.shape[1])

    @property
    def row_norms(self) -> np.ndarray:
        return np.linalg.norm(self.entries, axis=1)

    def row_orthogonality_defect(self, real_part: Optional[bool] = None) -> float:
        """max_{p != q} |<L_p, L_q>| / (||L_p|| ||L_q||); real part only for REAL_PART forms."""
        if self.port_count < 2:
            return 0.0
        if real_part is None:
            real_part = self.orthogonality is Orthogonality.REAL_PART
        gram = gram_matrix(self.entries)
        if real_part:
            gram = gram.real
        norms = self.row_norms
        scaled = np.abs(gram) / np.outer(norms, norms)
        np.fill_diagonal(scaled, 0.0)
        return float(scaled.max())

    def scaled_rows(self, factors) -> 'PortForms':
        """Forms with row p multiplied by factors[p] (orthogonality is preserved)."""
        f = np.asarray(factors, dtype=float).reshape(-1, 1)
        if f.shape[0] != self.port_count:
            raise ShapeError(f"Need {self.port_count} row factors, got {f.shape[0]}.")
        return PortForms(self.entries * f, self.orthogonality)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "port_count": self.port_count,
            "wave_dim": self.wave_dim,
            "row_norms": self.row_norms.tolist(),
            "orthogonality": self.orthogonality.value,
        }


@dataclass(frozen=True, eq=False)
class PerturbationMatrix:
    """
    Deviation Delta A of the port-level model parameters induced by the environment.
    The source term eta of the model is carried but always zero.
    """
    entries: np.ndarray
    model_type: ModelType = ModelType.SCATTERING
    source_term: np.ndarray = field(default=None)

    def __post_init__(self):
        A = np.asarray(self.entries, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ShapeError(f"A perturbation matrix must be square, got shape {A.shape}.")
        object.__setattr__(self, "entries", A)
        object.__setattr__(self, "model_type", ModelType(self.model_type))
        object.__setattr__(self, "source_term", np.zeros(A.shape[0], dtype=complex))

    @property
    def port_count(self) -> int:
        return int(self.entries.shape[0])

    @property
    def units(self) -> str:
        return self.model_type.units

    def is_symmetric(self, tolerance: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.T), initial=0.0) <= tolerance)


@dataclass(frozen=True, eq=False)
class VarianceTable:
    """
    Ensemble variances var(A_pq) of a perturbation matrix with their closed-form predictions.

    ``predicted`` holds ||L_p||^2 ||L_q||^2 rho^2 / N (times 2 on the diagonal);
    ``predicted_exact`` the finite-N value for orthogonal forms.
    """
    variances: np.ndarray
    predicted: np.ndarray
    predicted_exact: np.ndarray
    standard_errors: np.ndarray
    sample_count: int

    def __post_init__(self):
        var = np.asarray(self.variances, dtype=float)
        if var.ndim != 2 or var.shape[0] != var.shape[1]:
            raise ShapeError(f"A variance table must be square, got shape {var.shape}.")
        if np.any(var < 0):
            raise ValidationError("Variances must be non-negative.")
        object.__setattr__(self, "variances", var)

    @property
    def port_count(self) -> int:
        return int(self.variances.shape[0])

    def theoretical(self) -> 'VarianceTable':
        """The table that the large-N closed forms predict."""
        return VarianceTable(self.predicted, self.predicted, self.predicted_exact,
                             np.zeros_like(self.predicted), self.sample_count)

    def _index(self, p: int) -> int:
        if not 1 <= int(p) <= self.port_count:
            raise IndexRangeError(f"Port index {p} is outside [1, {self.port_count}].", flag="--ref-ports")
        return int(p) - 1

    def universal_ratio_residual(self, p: int, q: int) -> float:
        """
        |var(A_pq) - sqrt(var(A_pp) var(A_qq)) / 2| / var(A_pq) for 1-based ports p != q.

        Raises:
            ValidationError: If p == q.
            DegenerateEnsembleError: If var(A_pq) is zero.
        """
        i, j = self._index(p), self._index(q)
        if i == j:
            raise ValidationError("The universal ratio needs two distinct ports.", flag="--ref-ports")
        cross = self.variances[i, j]
        if cross <= 0.0:
            raise DegenerateEnsembleError(f"var(A_{p}{q}) is zero; the residual is undefined.")
        return float(abs(cross - 0.5 * np.sqrt(self.variances[i, i] * self.variances[j, j])) / cross)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sample_count": self.sample_count,
            "variances": self.variances.tolist(),
            "predicted": np.asarray(self.predicted).tolist(),
        }
