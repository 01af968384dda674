# src/utils/statistics.py
# Batch statistics helpers for complex samples: variances, covariances and jackknife errors.

from typing import Callable, List, Sequence, Tuple, TypeVar

import numpy as np

from src.cli.errors import InsufficientDataError, ShapeError
from src.domain.accumulator import ComplexAccumulator, CovarianceAccumulator

A = TypeVar("A", ComplexAccumulator, CovarianceAccumulator)


def complex_variance(samples, axis: int = 0) -> np.ndarray:
    """Unbiased complex variance E|z - Ez|^2 along ``axis``."""
    z = np.asarray(samples, dtype=complex)
    count = z.shape[axis]
    if count < 2:
        raise InsufficientDataError(f"Variance needs at least 2 samples, got {count}.")
    centred = z - z.mean(axis=axis, keepdims=True)
    return np.sum(centred.real ** 2 + centred.imag ** 2, axis=axis) / (count - 1)


def covariance_pair(u, v) -> complex:
    """
    Unbiased centred cross-moment E((u - mean u) * conj(v - mean v)) of paired complex samples.

    Raises:
        InsufficientDataError: With fewer than 2 pairs.
        ShapeError: If the two sample streams differ in length.
    """
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    if u.shape != v.shape:
        raise ShapeError(f"Paired samples differ in length: {u.size} vs {v.size}.")
    if u.size < 2:
        raise InsufficientDataError(f"Covariance needs at least 2 pairs, got {u.size}.")
    acc = CovarianceAccumulator().push_batch(u, v)
    return complex(acc.covariance())


def leave_one_out_variances(samples) -> np.ndarray:
    """Complex variances of the M leave-one-out subsamples along axis 0 (vectorised)."""
    z = np.asarray(samples, dtype=complex)
    count = z.shape[0]
    if count < 3:
        raise InsufficientDataError(f"Leave-one-out variances need at least 3 samples, got {count}.")
    total = z.sum(axis=0)
    total_sq = np.sum(np.abs(z) ** 2, axis=0)
    reduced = count - 1
    means = (total - z) / reduced
    return (total_sq - np.abs(z) ** 2 - reduced * np.abs(means) ** 2) / (reduced - 1)


def jackknife_standard_error(replicates) -> np.ndarray:
    """Jackknife standard error from leave-one-out (or leave-one-group-out) replicates along axis 0."""
    theta = np.asarray(replicates)
    count = theta.shape[0]
    if count < 2:
        raise InsufficientDataError("Jackknife needs at least 2 replicates.")
    spread = theta - theta.mean(axis=0)
    # complex statistics: magnitude of the spread
    return np.sqrt((count - 1) / count * np.sum(np.abs(spread) ** 2, axis=0))


def jackknife(samples, statistic: Callable[[np.ndarray], float]) -> Tuple[float, float]:
    """
    Delete-one jackknife of an arbitrary statistic over axis 0 of ``samples``.

    Returns:
        (statistic on the full sample, jackknife standard error)
    """
    z = np.asarray(samples)
    count = z.shape[0]
    if count < 3:
        raise InsufficientDataError(f"Jackknife needs at least 3 samples, got {count}.")
    full = float(statistic(z))
    replicates = [float(statistic(np.delete(z, i, axis=0))) for i in range(count)]
    return full, float(jackknife_standard_error(replicates))


def merge_all(accumulators: Sequence[A]) -> A:
    """Merges accumulators left to right (the order fixes the floating-point result)."""
    if not accumulators:
        raise InsufficientDataError("Nothing to merge.")
    merged = accumulators[0].copy()
    for acc in accumulators[1:]:
        merged = merged.merge(acc)
    return merged


def leave_one_group_out(groups: Sequence[A]) -> List[A]:
    """
    Accumulators for the whole ensemble minus each group in turn, via prefix/suffix merges.
    """
    count = len(groups)
    if count < 2:
        raise InsufficientDataError("Leave-one-group-out needs at least 2 groups.")
    prefix = [groups[0].copy()]
    for acc in groups[1:]:
        prefix.append(prefix[-1].merge(acc))
    suffix = [groups[-1].copy()]
    for acc in reversed(groups[:-1]):
        suffix.append(acc.merge(suffix[-1]))
    suffix.reverse()
    out = []
    for i in range(count):
        if i == 0:
            out.append(suffix[1].copy())
        elif i == count - 1:
            out.append(prefix[count - 2].copy())
        else:
            out.append(prefix[i - 1].merge(suffix[i + 1]))
    return out


def grouped_jackknife(groups: Sequence[A], statistic: Callable[[A], np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Delete-a-group jackknife over mergeable accumulators.

    Returns:
        (statistic of the merged ensemble, jackknife standard error), elementwise for array statistics.
    """
    total = statistic(merge_all(groups))
    replicates = np.stack([np.asarray(statistic(acc)) for acc in leave_one_group_out(groups)])
    return np.asarray(total), jackknife_standard_error(replicates)


def standard_error_bound(standard_error, k: float = 5.0) -> np.ndarray:
    """The k-standard-error acceptance band used throughout the statistical checks."""
    return k * np.asarray(standard_error, dtype=float)
