# src/domain/port_waves.py
# Defines port-level voltage/current states and their forward/backward wave decompositions.

from dataclasses import dataclass
from typing import Any, Dict, Union

import numpy as np

from src.cli.errors import InvalidReferenceError, ShapeError

Resistance = Union[float, np.ndarray]


def check_reference(R: Resistance, n: int) -> np.ndarray:
    """Reference resistance as a length-n vector; a scalar applies to every port."""
    values = np.asarray(R, dtype=float)
    if values.ndim == 0:
        values = np.full(n, float(values))
    if values.shape != (n,):
        raise ShapeError(f"Need one reference resistance or {n} of them, got shape {values.shape}.")
    if np.any(~np.isfinite(values)) or np.any(values <= 0.0):
        raise InvalidReferenceError(f"Reference resistance must be positive, got {R!r}.", flag="--reference-impedance")
    return values


@dataclass(frozen=True, eq=False)
class PortState:
    """Port voltages V (volts) and currents I (amperes, oriented into the system)."""
    voltage: np.ndarray
    current: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.voltage, dtype=complex))
        i = np.atleast_1d(np.asarray(self.current, dtype=complex))
        if v.ndim != 1 or v.shape != i.shape or v.size < 1:
            raise ShapeError(f"Voltage and current vectors must have equal length >= 1, got {v.shape} and {i.shape}.")
        object.__setattr__(self, "voltage", v)
        object.__setattr__(self, "current", i)

    @property
    def port_count(self) -> int:
        return int(self.voltage.size)

    def stacked(self) -> np.ndarray:
        """The pair (V, I) as one 2n vector."""
        return np.concatenate([self.voltage, self.current])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "voltage": [[z.real, z.imag] for z in self.voltage],
            "current": [[z.real, z.imag] for z in self.current],
        }


@dataclass(frozen=True, eq=False)
class WaveState:
    """Forward and backward wave amplitudes phi+ and phi- (sqrt(watts)) relative to R."""
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    reference_resistance: Resistance = 50.0

    def __post_init__(self):
        plus = np.atleast_1d(np.asarray(self.phi_plus, dtype=complex))
        minus = np.atleast_1d(np.asarray(self.phi_minus, dtype=complex))
        if plus.ndim != 1 or plus.shape != minus.shape or plus.size < 1:
            raise ShapeError(f"Wave vectors must have equal length >= 1, got {plus.shape} and {minus.shape}.")
        object.__setattr__(self, "phi_plus", plus)
        object.__setattr__(self, "phi_minus", minus)
        object.__setattr__(self, "reference_resistance", check_reference(self.reference_resistance, plus.size))

    @property
    def port_count(self) -> int:
        return int(self.phi_plus.size)
