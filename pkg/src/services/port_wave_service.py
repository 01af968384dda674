# src/services/port_wave_service.py
# Port-state algebra: wave projectors, voltage/current to wave conversion and the Lorentz-type pairing.

from typing import Optional, Tuple

import numpy as np
from cachetools import LRUCache, cached

from src.cli.errors import InvalidDimensionError, ServiceError, ShapeError
from src.domain.port_waves import PortState, Resistance, WaveState, check_reference

# -V^a.I^b + V^b.I^a = WAVE_PAIRING_FACTOR * (phi^a+ . phi^b- - phi^b+ . phi^a-)
# for phi = (V +- R I) / (2 sqrt(2R))
WAVE_PAIRING_FACTOR = 4.0


@cached(LRUCache(maxsize=256))
def _projector_blocks(R: Tuple[float, ...]) -> Tuple[np.ndarray, np.ndarray]:
    r = np.asarray(R, dtype=float)
    eye = np.eye(r.size)
    plus = 0.5 * np.block([[eye, np.diag(r)], [np.diag(1.0 / r), eye]])
    minus = 0.5 * np.block([[eye, -np.diag(r)], [-np.diag(1.0 / r), eye]])
    plus.setflags(write=False)
    minus.setflags(write=False)
    return plus, minus


def projectors(R: Resistance, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Projectors Pi+ and Pi- on stacked (V, I):
    Pi+- = 1/2 [[I, +-R I], [+-R^-1 I, I]] (R may differ per port).

    The returned arrays are read-only.

    Raises:
        InvalidReferenceError: If any R <= 0.
        InvalidDimensionError: If n < 1.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidDimensionError(f"Port count must be a positive integer, got {n!r}.")
    r = check_reference(R, int(n))
    return _projector_blocks(tuple(float(x) for x in r))


def to_waves(state: PortState, R: Resistance) -> WaveState:
    """phi+- = (V +- R I) / (2 sqrt(2R)): voltage part of Pi+- (V, I) scaled by 1/sqrt(2R)."""
    r = check_reference(R, state.port_count)
    scale = 1.0 / (2.0 * np.sqrt(2.0 * r))
    return WaveState(
        phi_plus=(state.voltage + r * state.current) * scale,
        phi_minus=(state.voltage - r * state.current) * scale,
        reference_resistance=r,
    )


def from_waves(waves: WaveState) -> PortState:
    """Inverse of ``to_waves``: V = sqrt(2R)(phi+ + phi-), I = sqrt(2R)(phi+ - phi-)/R."""
    r = waves.reference_resistance
    root = np.sqrt(2.0 * r)
    return PortState(
        voltage=root * (waves.phi_plus + waves.phi_minus),
        current=root * (waves.phi_plus - waves.phi_minus) / r,
    )


def wave_pairing(a: WaveState, b: WaveState) -> complex:
    """phi^a+ . phi^b- - phi^b+ . phi^a- (bilinear, no conjugation)."""
    if a.port_count != b.port_count:
        raise ShapeError(f"Wave states have {a.port_count} and {b.port_count} ports.")
    return complex(np.dot(a.phi_plus, b.phi_minus) - np.dot(b.phi_plus, a.phi_minus))


def lorentz_pairing(a: PortState, b: PortState, R: Optional[Resistance] = None, rtol: float = 1e-12) -> complex:
    """
    -V^a . I^b + V^b . I^a (bilinear dot products, no conjugation).

    When ``R`` is given the value is also evaluated from the wave decomposition and the
    two sides are checked to agree.

    Raises:
        ShapeError: If the states have different port counts.
    """
    if a.port_count != b.port_count:
        raise ShapeError(f"Port states have {a.port_count} and {b.port_count} ports.")
    value = complex(-np.dot(a.voltage, b.current) + np.dot(b.voltage, a.current))
    if R is not None:
        waves = WAVE_PAIRING_FACTOR * wave_pairing(to_waves(a, R), to_waves(b, R))
        scale = max(1.0, abs(value), abs(waves))
        if abs(value - waves) > rtol * scale:
            raise ServiceError(f"Pairing identity violated: {value} vs {waves}.")
    return value


def reciprocity_defect(A, x_a, x_b) -> complex:
    """
    x_b^T (A x_a) - x_a^T (A x_b) for port excitations x_a, x_b; zero whenever A is symmetric.

    Raises:
        ShapeError: If A is not square or the excitations do not match it.
    """
    model = np.asarray(A, dtype=complex)
    xa = np.asarray(x_a, dtype=complex).ravel()
    xb = np.asarray(x_b, dtype=complex).ravel()
    if model.ndim != 2 or model.shape[0] != model.shape[1] or xa.size != model.shape[0] or xb.size != model.shape[0]:
        raise ShapeError(f"Incompatible shapes: A {model.shape}, x_a {xa.shape}, x_b {xb.shape}.")
    return complex(xb @ (model @ xa) - xa @ (model @ xb))
