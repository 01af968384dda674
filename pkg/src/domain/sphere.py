# src/domain/sphere.py
# Defines data models for isotropic stochastic unit vectors and their sampling configuration.

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict

import numpy as np

from src.cli.errors import ConfigurationError, InvalidDimensionError

NORM_TOLERANCE = 1e-12


class Field(str, Enum):
    """Scalar field the unit sphere lives in."""
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True, eq=False)
class RealUnitVector:
    """A point on the real unit sphere S^{n-1}. Immutable."""
    components: np.ndarray

    def __post_init__(self):
        if self.components.ndim != 1 or self.components.size < 1:
            raise InvalidDimensionError("A unit vector needs at least one component.")
        norm = float(np.linalg.norm(self.components))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"Vector norm {norm!r} differs from 1 by more than {NORM_TOLERANCE}.")

    @property
    def dimension(self) -> int:
        return int(self.components.size)

    def to_dict(self) -> Dict[str, Any]:
        return {"dimension": self.dimension, "components": self.components.tolist()}


@dataclass(frozen=True, eq=False)
class ComplexUnitVector:
    """A point on the complex unit sphere in C^N (equivalently S^{2N-1} in R^{2N}). Immutable."""
    components: np.ndarray

    def __post_init__(self):
        if self.components.ndim != 1 or self.components.size < 1:
            raise InvalidDimensionError("A unit vector needs at least one component.")
        norm = float(np.sqrt(np.sum(self.components.real ** 2 + self.components.imag ** 2)))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"Vector norm {norm!r} differs from 1 by more than {NORM_TOLERANCE}.")

    @property
    def dimension(self) -> int:
        return int(self.components.size)

    def as_real(self) -> np.ndarray:
        """Interleaved (re, im) pairs: the same point seen as a unit vector of R^{2N}."""
        return np.column_stack([self.components.real, self.components.imag]).ravel()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dimension": self.dimension,
            "components": [[z.real, z.imag] for z in self.components.tolist()],
        }


@dataclass(frozen=True)
class IsotropicSampleConfig:
    """
    Governs sphere sampling: dimension, scalar field, master seed and number of samples.
    """
    dimension: int
    field: Field = Field.REAL
    seed: int = 0
    sample_count: int = 1

    def __post_init__(self):
        if not isinstance(self.dimension, (int, np.integer)) or self.dimension < 1:
            raise InvalidDimensionError(f"dimension must be a positive integer, got {self.dimension!r}.", flag="--dim")
        if not isinstance(self.sample_count, (int, np.integer)) or self.sample_count < 1:
            raise ConfigurationError(f"sample_count must be a positive integer, got {self.sample_count!r}.", flag="--count")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}.", flag="--seed")
        if not isinstance(self.field, Field):
            try:
                object.__setattr__(self, "field", Field(self.field))
            except ValueError as e:
                raise ConfigurationError(f"Unknown field {self.field!r}.", flag="--field") from e

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dimension": int(self.dimension),
            "field": self.field.value,
            "seed": int(self.seed),
            "sample_count": int(self.sample_count),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'IsotropicSampleConfig':
        if not isinstance(data, dict):
            raise ConfigurationError("Invalid data format for IsotropicSampleConfig")
        try:
            field_value = Field(data.get("field", Field.REAL.value))
        except ValueError as e:
            raise ConfigurationError(f"Unknown field {data.get('field')!r}.", flag="--field") from e
        return cls(
            dimension=int(data.get("dimension", 0)),
            field=field_value,
            seed=int(data.get("seed", 0)),
            sample_count=int(data.get("sample_count", 1)),
        )
