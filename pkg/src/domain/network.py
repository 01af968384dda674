# src/domain/network.py
# Defines data models for frequency-swept S-parameter records, stirred sweeps and variance curves.

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from src.cli.errors import AlignmentError, InsufficientDataError, ShapeError, ValidationError


@dataclass(frozen=True, eq=False)
class NetworkRecord:
    """S-parameters of a P-port network at one frequency (hertz)."""
    frequency: float
    s_matrix: np.ndarray
    reference_impedance: float = 50.0

    def __post_init__(self):
        if not np.isfinite(self.frequency) or self.frequency <= 0.0:
            raise ValidationError(f"Frequency must be strictly positive, got {self.frequency!r}.")
        s = np.asarray(self.s_matrix, dtype=complex)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] < 1:
            raise ShapeError(f"S-matrix must be P x P with P >= 1, got shape {s.shape}.")
        if not self.reference_impedance > 0.0:
            raise ValidationError(f"Reference impedance must be positive, got {self.reference_impedance!r}.")
        object.__setattr__(self, "frequency", float(self.frequency))
        object.__setattr__(self, "s_matrix", s)

    @property
    def port_count(self) -> int:
        return int(self.s_matrix.shape[0])


@dataclass
class SweepDataset:
    """
    One frequency sweep per stirrer state, in stir order. ``labels`` name the states
    (file names for data read from disk).
    """
    stir_states: List[List[NetworkRecord]] = field(default_factory=list)
    labels: List[str] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.labels:
            self.labels = [f"stir_{i:04d}" for i in range(len(self.stir_states))]
        if len(self.labels) != len(self.stir_states):
            raise ValidationError(f"{len(self.labels)} labels for {len(self.stir_states)} stir states.")

    @property
    def stir_count(self) -> int:
        return len(self.stir_states)

    @property
    def port_count(self) -> int:
        for sweep in self.stir_states:
            if sweep:
                return sweep[0].port_count
        return 0

    def frequency_grid(self) -> np.ndarray:
        """
        The common frequency grid of all stir states.

        Raises:
            AlignmentError: If the grids differ; lists the frequencies not shared by every state.
        """
        if not self.stir_states:
            return np.empty(0)
        grids = [np.array([r.frequency for r in sweep]) for sweep in self.stir_states]
        reference = grids[0]
        offending = set()
        for grid in grids[1:]:
            if grid.shape != reference.shape or not np.array_equal(grid, reference):
                offending |= set(reference.tolist()) ^ set(grid.tolist())
                if not offending:
                    # same frequency set, different order or multiplicity
                    offending |= set(grid.tolist())
        if offending:
            raise AlignmentError("Stir states do not share a common frequency grid.", frequencies=sorted(offending))
        return reference

    def stacked(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        (frequencies, S) with S of shape (stir_count, frequency_count, P, P).

        Raises:
            AlignmentError: If the frequency grids differ.
            ShapeError: If port counts differ between records.
        """
        grid = self.frequency_grid()
        P = self.port_count
        for sweep in self.stir_states:
            for record in sweep:
                if record.port_count != P:
                    raise ShapeError(f"Mixed port counts in sweep: {record.port_count} vs {P}.")
        if not grid.size:
            return grid, np.empty((self.stir_count, 0, P, P), dtype=complex)
        data = np.array([[r.s_matrix for r in sweep] for sweep in self.stir_states], dtype=complex)
        return grid, data


@dataclass(frozen=True)
class VarianceRow:
    """Variance statistics across stir states at one frequency for the port pair (p, q)."""
    frequency: float
    var_pp: float
    var_qq: float
    var_pq: float
    predicted_var_pq: float
    rel_residual: float
    low_confidence: bool = False


@dataclass
class VarianceCurve:
    """Per-frequency variances of S_pp, S_qq, S_pq with the universal-ratio prediction for S_pq."""
    rows: List[VarianceRow] = field(default_factory=list)
    ports: Tuple[int, int] = (1, 2)
    stir_count: int = 0

    def __post_init__(self):
        for row in self.rows:
            if min(row.var_pp, row.var_qq, row.var_pq) < 0:
                raise ValidationError(f"Negative variance at {row.frequency} Hz.")

    @property
    def header(self) -> List[str]:
        p, q = self.ports
        return ["freq_hz", f"var_s{p}{p}", f"var_s{q}{q}", f"var_s{p}{q}", f"predicted_var_s{p}{q}",
                "rel_residual", "low_confidence"]

    def column(self, name: str) -> np.ndarray:
        index = self.header.index(name)
        return np.array([self.as_tuple(row)[index] for row in self.rows], dtype=float)

    @staticmethod
    def as_tuple(row: VarianceRow) -> Tuple[Any, ...]:
        return (row.frequency, row.var_pp, row.var_qq, row.var_pq, row.predicted_var_pq,
                row.rel_residual, int(row.low_confidence))

    def median_residual(self) -> float:
        residuals = np.array([row.rel_residual for row in self.rows], dtype=float)
        residuals = residuals[np.isfinite(residuals)]
        if not residuals.size:
            raise InsufficientDataError("No frequency has a defined residual.")
        return float(np.median(residuals))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ports": list(self.ports),
            "stir_count": self.stir_count,
            "rows": [dict(zip(self.header, self.as_tuple(row))) for row in self.rows],
        }


def flag_low_confidence(stir_count: int) -> bool:
    return stir_count < 3
