# tests/conftest.py
# Shared fixtures: seeded generators, standard-error bounds and small synthetic datasets.

import os
import sys

import numpy as np
import pytest

PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from src.domain.ensemble import SieConfig  # noqa: E402
from src.domain.network import NetworkRecord, SweepDataset  # noqa: E402

SE_K = 5.0


def se_bound(standard_error, k: float = SE_K) -> float:
    """Acceptance band of k standard errors."""
    return k * float(standard_error)


def mean_with_se(values):
    """Sample mean and its standard error."""
    values = np.asarray(values, dtype=float)
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def rng_factory():
    def make(seed: int = 0):
        return np.random.default_rng(seed)
    return make


@pytest.fixture
def small_config():
    return SieConfig(dimension=8, rho=0.8)


@pytest.fixture
def two_port_sweep():
    """Three stir states over two frequencies with hand-picked S-matrices."""
    rng = np.random.default_rng(5)
    states = []
    for _ in range(3):
        records = []
        for f in (1e9, 2e9):
            g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            records.append(NetworkRecord(f, 0.1 * (g + g.T)))
        states.append(records)
    return SweepDataset(stir_states=states)


@pytest.fixture
def workdir(tmp_path):
    """A temporary directory used as the current directory."""
    cwd = os.getcwd()
    os.chdir(tmp_path)
    try:
        yield tmp_path
    finally:
        os.chdir(cwd)
