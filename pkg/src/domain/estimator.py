# src/domain/estimator.py
# Defines data models for port coupling strengths and estimates of the environment reflection coefficient.

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from src.cli.errors import ModelError


class PortModelType(str, Enum):
    THEVENIN = "thevenin"
    NORTON = "norton"
    SCATTERING = "scattering"


@dataclass(frozen=True)
class PortNormModel:
    """
    How the squared norm ||L_p||^2 of a port form is obtained:
    the radiation resistance (Thevenin), the radiation conductance (Norton), or
    (1 - |S_pp|^2) C from the free-space reflection and an efficiency C (scattering).
    """
    model_type: PortModelType
    radiation_resistance: Optional[float] = None
    radiation_conductance: Optional[float] = None
    reflection: Optional[complex] = None
    efficiency: float = 1.0

    def __post_init__(self):
        try:
            object.__setattr__(self, "model_type", PortModelType(self.model_type))
        except ValueError as e:
            raise ModelError(f"Unknown port model {self.model_type!r}.", flag="--port-model") from e
        if self.model_type is PortModelType.THEVENIN:
            self._require_positive("radiation_resistance", self.radiation_resistance)
        elif self.model_type is PortModelType.NORTON:
            self._require_positive("radiation_conductance", self.radiation_conductance)
        else:
            if self.reflection is None:
                raise ModelError("A scattering port model needs the reflection coefficient S_pp.")
            if abs(complex(self.reflection)) > 1.0:
                raise ModelError(f"|S_pp| must not exceed 1, got {abs(complex(self.reflection))!r}.")
            if not (0.0 < float(self.efficiency) <= 1.0):
                raise ModelError(f"Efficiency C must lie in (0, 1], got {self.efficiency!r}.")

    @staticmethod
    def _require_positive(name: str, value: Optional[float]) -> None:
        if value is None or not np.isfinite(value) or value <= 0.0:
            raise ModelError(f"{name} must be a positive number, got {value!r}.")

    @classmethod
    def matched_lossless(cls) -> 'PortNormModel':
        """Perfectly adapted lossless antenna: S_pp = 0, C = 1."""
        return cls(PortModelType.SCATTERING, reflection=0.0, efficiency=1.0)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"model_type": self.model_type.value}
        if self.model_type is PortModelType.THEVENIN:
            data["radiation_resistance"] = self.radiation_resistance
        elif self.model_type is PortModelType.NORTON:
            data["radiation_conductance"] = self.radiation_conductance
        else:
            data["reflection_magnitude"] = abs(complex(self.reflection))
            data["efficiency"] = self.efficiency
        return data


@dataclass(frozen=True)
class CouplingEstimate:
    """
    Effective reflection coefficient recovered from transmission statistics.

    ``rho_hat`` is the raw estimate sqrt(var(S_pq)) / (||L_p|| ||L_q||), which still
    carries the unknown 1/sqrt(N); ``rho_hat_normalized`` multiplies it by sqrt(N)
    when the wave-space dimension is supplied.
    """
    rho_hat: float
    rho_half_width: float
    predicted_cross_variance: float
    empirical_cross_variance: float
    var_pp: Optional[float] = None
    var_qq: Optional[float] = None
    rho_hat_normalized: Optional[float] = None
    frequency: Optional[float] = None
    sample_count: int = 0

    def __post_init__(self):
        if self.rho_hat < 0:
            raise ValueError("rho_hat must be non-negative.")

    @property
    def relative_residual(self) -> float:
        """|empirical - predicted| / empirical cross variance, NaN when the empirical value is zero."""
        if self.empirical_cross_variance <= 0.0:
            return float("nan")
        return abs(self.empirical_cross_variance - self.predicted_cross_variance) / self.empirical_cross_variance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "freq_hz": self.frequency,
            "var_spp": self.var_pp,
            "var_sqq": self.var_qq,
            "var_spq": self.empirical_cross_variance,
            "predicted_var_spq": self.predicted_cross_variance,
            "rel_residual": self.relative_residual,
            "rho_hat": self.rho_hat,
            "rho_half_width": self.rho_half_width,
            "rho_hat_normalized": self.rho_hat_normalized,
            "sample_count": self.sample_count,
        }
