# src/domain/accumulator.py
# Mergeable one-pass accumulators for complex samples (means, variances, cross-covariances).

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from src.cli.errors import InsufficientDataError, ShapeError


@dataclass
class ComplexAccumulator:
    """
    Running count, mean and sum of squared magnitudes of centred samples (Welford update).

    Samples may be scalars or arrays of a fixed shape; every entry is tracked
    independently. The complex variance is E|z - Ez|^2, i.e. the variance of the
    real part plus the variance of the imaginary part, with the unbiased (M-1) divisor.
    Accumulators are single-writer; combine them across workers with ``merge``.
    """
    shape: Tuple[int, ...] = ()
    count: int = 0
    mean: np.ndarray = field(default=None)
    m2: np.ndarray = field(default=None)

    def __post_init__(self):
        self.shape = tuple(self.shape)
        if self.mean is None:
            self.mean = np.zeros(self.shape, dtype=complex)
        if self.m2 is None:
            self.m2 = np.zeros(self.shape, dtype=float)

    def _check(self, sample: np.ndarray) -> np.ndarray:
        if sample.shape != self.shape:
            raise ShapeError(f"Sample shape {sample.shape} does not match accumulator shape {self.shape}.")
        return sample

    def push(self, sample) -> 'ComplexAccumulator':
        """One-pass, numerically stable update with a single sample. Returns self."""
        z = self._check(np.asarray(sample, dtype=complex))
        self.count += 1
        delta = z - self.mean
        self.mean = self.mean + delta / self.count
        # (z - mean_old) * conj(z - mean_new) is real: |delta|^2 (n-1)/n
        self.m2 = self.m2 + (delta.real ** 2 + delta.imag ** 2) * ((self.count - 1) / self.count)
        return self

    def push_batch(self, samples) -> 'ComplexAccumulator':
        """Adds a stack of samples (leading axis) by merging their exact batch statistics. Returns self."""
        batch = np.asarray(samples, dtype=complex)
        if batch.shape[1:] != self.shape:
            raise ShapeError(f"Batch entries of shape {batch.shape[1:]} do not match accumulator shape {self.shape}.")
        if batch.shape[0] == 0:
            return self
        batch_mean = batch.mean(axis=0)
        centred = batch - batch_mean
        batch_m2 = np.sum(centred.real ** 2 + centred.imag ** 2, axis=0)
        other = ComplexAccumulator(self.shape, int(batch.shape[0]), batch_mean, batch_m2)
        merged = self.merge(other)
        self.count, self.mean, self.m2 = merged.count, merged.mean, merged.m2
        return self

    def merge(self, other: 'ComplexAccumulator') -> 'ComplexAccumulator':
        """Parallel-merge formula; equals accumulating the concatenation of both sample streams."""
        if other.shape != self.shape:
            raise ShapeError(f"Cannot merge accumulators of shapes {self.shape} and {other.shape}.")
        if other.count == 0:
            return self.copy()
        if self.count == 0:
            return other.copy()
        total = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / total)
        m2 = self.m2 + other.m2 + (delta.real ** 2 + delta.imag ** 2) * (self.count * other.count / total)
        return ComplexAccumulator(self.shape, total, mean, m2)

    def copy(self) -> 'ComplexAccumulator':
        return ComplexAccumulator(self.shape, self.count, np.array(self.mean, copy=True), np.array(self.m2, copy=True))

    def variance(self) -> np.ndarray:
        if self.count < 2:
            raise InsufficientDataError(f"Variance needs at least 2 samples, got {self.count}.")
        return self.m2 / (self.count - 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "count": self.count,
            "mean": np.asarray(self.mean).tolist(),
            "m2": np.asarray(self.m2).tolist(),
        }


@dataclass
class CovarianceAccumulator:
    """
    Running centred cross-moment sum of (u - mean_u) * conj(v - mean_v) for complex pairs.
    Shapes work as in ComplexAccumulator; ``u`` and ``v`` share one shape.
    """
    shape: Tuple[int, ...] = ()
    count: int = 0
    mean_u: np.ndarray = field(default=None)
    mean_v: np.ndarray = field(default=None)
    comoment: np.ndarray = field(default=None)

    def __post_init__(self):
        self.shape = tuple(self.shape)
        if self.mean_u is None:
            self.mean_u = np.zeros(self.shape, dtype=complex)
        if self.mean_v is None:
            self.mean_v = np.zeros(self.shape, dtype=complex)
        if self.comoment is None:
            self.comoment = np.zeros(self.shape, dtype=complex)

    def push(self, u, v) -> 'CovarianceAccumulator':
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        if u.shape != self.shape or v.shape != self.shape:
            raise ShapeError(f"Pair shapes {u.shape}, {v.shape} do not match accumulator shape {self.shape}.")
        self.count += 1
        du = u - self.mean_u
        self.mean_u = self.mean_u + du / self.count
        self.mean_v = self.mean_v + (v - self.mean_v) / self.count
        self.comoment = self.comoment + du * np.conj(v - self.mean_v)
        return self

    def push_batch(self, u, v) -> 'CovarianceAccumulator':
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        if u.shape != v.shape or u.shape[1:] != self.shape:
            raise ShapeError(f"Batch shapes {u.shape}, {v.shape} do not match accumulator shape {self.shape}.")
        if u.shape[0] == 0:
            return self
        mu, mv = u.mean(axis=0), v.mean(axis=0)
        comoment = np.sum((u - mu) * np.conj(v - mv), axis=0)
        merged = self.merge(CovarianceAccumulator(self.shape, int(u.shape[0]), mu, mv, comoment))
        self.count, self.mean_u, self.mean_v, self.comoment = merged.count, merged.mean_u, merged.mean_v, merged.comoment
        return self

    def merge(self, other: 'CovarianceAccumulator') -> 'CovarianceAccumulator':
        if other.shape != self.shape:
            raise ShapeError(f"Cannot merge accumulators of shapes {self.shape} and {other.shape}.")
        if other.count == 0:
            return self.copy()
        if self.count == 0:
            return other.copy()
        total = self.count + other.count
        du = other.mean_u - self.mean_u
        dv = other.mean_v - self.mean_v
        weight = other.count / total
        return CovarianceAccumulator(
            self.shape,
            total,
            self.mean_u + du * weight,
            self.mean_v + dv * weight,
            self.comoment + other.comoment + du * np.conj(dv) * (self.count * other.count / total),
        )

    def copy(self) -> 'CovarianceAccumulator':
        return CovarianceAccumulator(self.shape, self.count, np.array(self.mean_u, copy=True),
                                     np.array(self.mean_v, copy=True), np.array(self.comoment, copy=True))

    def covariance(self) -> np.ndarray:
        if self.count < 2:
            raise InsufficientDataError(f"Covariance needs at least 2 pairs, got {self.count}.")
        return self.comoment / (self.count - 1)
