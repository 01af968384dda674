# src/domain/ensemble.py
# Defines data models for spectrally isotropic stochastic scattering matrices and their moment reports.

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.cli.errors import ConfigurationError, InvalidDimensionError, ShapeError


class EigenvalueDistribution(str, Enum):
    FIXED_MODULUS_UNIFORM_PHASE = "fixed_modulus_uniform_phase"
    COMPLEX_GAUSSIAN = "complex_gaussian"


class VectorMode(str, Enum):
    INDEPENDENT_ISOTROPIC = "independent_isotropic"
    ORTHONORMAL_FRAME = "orthonormal_frame"


class EnsembleKind(str, Enum):
    SPECTRAL_ISOTROPIC = "spectral_isotropic"
    CIRCULAR_ORTHOGONAL = "circular_orthogonal"


# CLI --mode values; "paper" and "isotropic" name the same construction
MODE_ALIASES = {
    "paper": (EnsembleKind.SPECTRAL_ISOTROPIC, VectorMode.INDEPENDENT_ISOTROPIC),
    "isotropic": (EnsembleKind.SPECTRAL_ISOTROPIC, VectorMode.INDEPENDENT_ISOTROPIC),
    "frame": (EnsembleKind.SPECTRAL_ISOTROPIC, VectorMode.ORTHONORMAL_FRAME),
    "coe": (EnsembleKind.CIRCULAR_ORTHOGONAL, VectorMode.INDEPENDENT_ISOTROPIC),
}


def _coerce(enum_cls, value, flag: str):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(value)
    except ValueError as e:
        allowed = ", ".join(member.value for member in enum_cls)
        raise ConfigurationError(f"Unknown value {value!r}; expected one of: {allowed}.", flag=flag) from e


@dataclass(frozen=True)
class SieConfig:
    """
    Configuration of a statistically isotropic environment ensemble. Immutable.

    ``term_count`` defaults to the wave-space dimension. ``rho`` is the effective
    reflection coefficient: every spectral multiplier has E|s|^2 = rho^2.
    """
    dimension: int
    rho: float = 1.0
    eigenvalue_dist: EigenvalueDistribution = EigenvalueDistribution.FIXED_MODULUS_UNIFORM_PHASE
    term_count: Optional[int] = None
    vector_mode: VectorMode = VectorMode.INDEPENDENT_ISOTROPIC
    ensemble: EnsembleKind = EnsembleKind.SPECTRAL_ISOTROPIC

    def __post_init__(self):
        if isinstance(self.dimension, bool) or not isinstance(self.dimension, (int, np.integer)) or self.dimension < 1:
            raise InvalidDimensionError(f"dimension must be a positive integer, got {self.dimension!r}.", flag="--dim")
        rho = float(self.rho)
        if not (0.0 < rho <= 1.0):
            raise ConfigurationError(f"rho must lie in (0, 1], got {self.rho!r}.", flag="--rho")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "eigenvalue_dist", _coerce(EigenvalueDistribution, self.eigenvalue_dist, "--eigenvalues"))
        object.__setattr__(self, "vector_mode", _coerce(VectorMode, self.vector_mode, "--mode"))
        object.__setattr__(self, "ensemble", _coerce(EnsembleKind, self.ensemble, "--mode"))
        if self.term_count is None:
            object.__setattr__(self, "term_count", int(self.dimension))
        if isinstance(self.term_count, bool) or not isinstance(self.term_count, (int, np.integer)) or self.term_count < 1:
            raise ConfigurationError(f"term_count must be a positive integer, got {self.term_count!r}.", flag="--terms")
        if self.vector_mode is VectorMode.ORTHONORMAL_FRAME and self.term_count > self.dimension:
            raise ConfigurationError(
                f"An orthonormal frame has at most {self.dimension} columns; term_count={self.term_count}.", flag="--terms")

    @classmethod
    def from_mode(cls, dimension: int, rho: float, mode: str = "isotropic", **kwargs) -> 'SieConfig':
        if mode not in MODE_ALIASES:
            raise ConfigurationError(f"Unknown mode {mode!r}; expected one of: {', '.join(MODE_ALIASES)}.", flag="--mode")
        ensemble, vector_mode = MODE_ALIASES[mode]
        return cls(dimension=dimension, rho=rho, ensemble=ensemble, vector_mode=vector_mode, **kwargs)

    def scaled(self, factor: float) -> 'SieConfig':
        """Same ensemble with rho multiplied by ``factor``."""
        return SieConfig(self.dimension, self.rho * factor, self.eigenvalue_dist, self.term_count,
                         self.vector_mode, self.ensemble)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dimension": int(self.dimension),
            "rho": self.rho,
            "eigenvalue_dist": self.eigenvalue_dist.value,
            "term_count": int(self.term_count),
            "vector_mode": self.vector_mode.value,
            "ensemble": self.ensemble.value,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SieConfig':
        if not isinstance(data, dict):
            raise ConfigurationError("Invalid data format for SieConfig")
        return cls(
            dimension=int(data.get("dimension", 0)),
            rho=float(data.get("rho", 1.0)),
            eigenvalue_dist=data.get("eigenvalue_dist", EigenvalueDistribution.FIXED_MODULUS_UNIFORM_PHASE.value),
            term_count=int(data["term_count"]) if data.get("term_count") is not None else None,
            vector_mode=data.get("vector_mode", VectorMode.INDEPENDENT_ISOTROPIC.value),
            ensemble=data.get("ensemble", EnsembleKind.SPECTRAL_ISOTROPIC.value),
        )


@dataclass(frozen=True, eq=False)
class ScatteringMatrix:
    """Fluctuating part of an environment scattering matrix; complex symmetric. Immutable."""
    entries: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.entries)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ShapeError(f"A scattering matrix must be square, got shape {s.shape}.")
        if not np.array_equal(s, s.T):
            raise ShapeError("Scattering matrix is not exactly complex symmetric.")
        object.__setattr__(self, "entries", s.astype(complex, copy=False))

    @property
    def dimension(self) -> int:
        return int(self.entries.shape[0])

    def symmetry_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.T)))


Quadruple = Tuple[int, int, int, int]


@dataclass(frozen=True)
class MomentEntry:
    """E(S_kl conj(S_mn)) for one index quadruple (1-based), with its predictions."""
    quadruple: Quadruple
    empirical: complex
    predicted: float
    predicted_exact: float
    standard_error: float

    def deviation(self) -> float:
        return abs(self.empirical - self.predicted)

    def to_dict(self) -> Dict[str, Any]:
        k, l, m, n = self.quadruple
        return {
            "k": k, "l": l, "m": m, "n": n,
            "empirical_re": self.empirical.real,
            "empirical_im": self.empirical.imag,
            "predicted": self.predicted,
            "predicted_exact": self.predicted_exact,
            "stderr": self.standard_error,
        }


@dataclass(frozen=True, eq=False)
class MomentReport:
    """Ensemble means, per-entry variances and requested second moments."""
    mean_matrix: np.ndarray
    variances: np.ndarray
    variance_standard_errors: np.ndarray
    entries: List[MomentEntry] = field(default_factory=list)
    sample_count: int = 0

    def __post_init__(self):
        if np.any(self.variances < 0):
            raise ValueError("Variances must be non-negative.")

    def entry(self, quadruple: Quadruple) -> MomentEntry:
        for item in self.entries:
            if item.quadruple == tuple(quadruple):
                return item
        raise KeyError(quadruple)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sample_count": self.sample_count,
            "entries": [e.to_dict() for e in self.entries],
        }
