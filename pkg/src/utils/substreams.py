# src/utils/substreams.py
# Deterministic per-sample random substreams derived from a master seed.

from typing import List, Tuple

import numpy as np

from src.cli.errors import ConfigurationError

SEED_LIMIT = 2 ** 64


def validate_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {seed}.", flag="--seed")
    return seed


def sample_stream(seed: int, index: int, *stream: int) -> np.random.Generator:
    """
    Generator for sample ``index`` under master ``seed``.

    The substream is a pure function of (seed, index, *stream), so any number of
    workers can draw any subset of samples and obtain identical values. Extra
    ``stream`` keys separate independent uses of the same sample index.
    """
    sequence = np.random.SeedSequence(entropy=validate_seed(seed), spawn_key=(int(index),) + tuple(int(s) for s in stream))
    return np.random.Generator(np.random.PCG64(sequence))


def master_stream(seed: int, purpose: int) -> np.random.Generator:
    """A generator for one-off draws that are not tied to a sample index (e.g. port forms)."""
    return sample_stream(seed, SEED_LIMIT - 1 - int(purpose))


def partition(sample_count: int, group_count: int) -> List[Tuple[int, int]]:
    """
    Splits [0, sample_count) into at most ``group_count`` contiguous, non-empty ranges.

    The split depends only on the two counts, never on the number of workers.
    """
    if sample_count < 1:
        return []
    groups = max(1, min(int(group_count), int(sample_count)))
    bounds = np.linspace(0, sample_count, groups + 1).round().astype(int)
    return [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
