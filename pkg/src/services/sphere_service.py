# src/services/sphere_service.py
# Sampling and closed-form statistics of isotropic stochastic unit vectors on real and complex spheres.

from typing import Optional, Sequence, Tuple, Union

import numpy as np
from cachetools import LRUCache, cached
from scipy import stats
from scipy.special import gammaln

from src.cli.errors import (
    DomainError,
    InvalidDimensionError,
    InvalidMarginalError,
    UnsupportedOrderError,
    ValidationError,
)
from src.domain.sphere import ComplexUnitVector, Field, IsotropicSampleConfig, RealUnitVector
from src.utils.logger import logger
from src.utils.parallel import ordered_map
from src.utils.substreams import partition, sample_stream

ArrayLike = Union[float, Sequence[float], np.ndarray]


def _require_dimension(n, minimum: int, name: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < minimum:
        raise InvalidDimensionError(f"{name} must be an integer >= {minimum}, got {n!r}.", flag="--dim")
    return int(n)


def _unit_gaussian(rng: np.random.Generator, size: int) -> np.ndarray:
    # a zero Gaussian vector has probability zero; redraw rather than divide by it
    while True:
        g = rng.standard_normal(size)
        norm = np.linalg.norm(g)
        if norm > 0.0:
            return g / norm


# --- Sampling ---

def sample_real_unit_vector(n: int, rng: np.random.Generator) -> RealUnitVector:
    """
    Uniform point on S^{n-1}: n i.i.d. standard normals, normalised.

    Raises:
        InvalidDimensionError: If n < 1.
    """
    n = _require_dimension(n, 1)
    return RealUnitVector(_unit_gaussian(rng, n))


def sample_complex_unit_vector(N: int, rng: np.random.Generator) -> ComplexUnitVector:
    """
    Isotropic unit vector of C^N: a uniform point of S^{2N-1} read as N (re, im) pairs.

    Raises:
        InvalidDimensionError: If N < 1.
    """
    N = _require_dimension(N, 1, "N")
    pairs = _unit_gaussian(rng, 2 * N).reshape(N, 2)
    return ComplexUnitVector(pairs[:, 0] + 1j * pairs[:, 1])


def complex_unit_rows(rng: np.random.Generator, count: int, N: int) -> np.ndarray:
    """``count`` independent isotropic unit vectors of C^N as rows of a (count, N) array."""
    g = rng.standard_normal((count, N, 2))
    z = g[..., 0] + 1j * g[..., 1]
    norms = np.sqrt(np.sum(g ** 2, axis=(1, 2)))
    return z / norms[:, None]


# --- Closed forms ---

@cached(LRUCache(maxsize=1024))
def _log_sphere_area_ratio(n: int, m: int) -> float:
    """log(|S^{n-m-1}| / |S^{n-1}|) = log Gamma(n/2) - (m/2) log(pi) - log Gamma((n-m)/2)."""
    return float(gammaln(n / 2.0) - 0.5 * m * np.log(np.pi) - gammaln((n - m) / 2.0))


def _power_of_complement(squares: np.ndarray, exponent: float) -> np.ndarray:
    """(1 - s)^exponent with the conventions 0^0 = 1 and 0^(negative) = +inf."""
    if exponent == 0.0:
        return np.ones_like(squares)
    with np.errstate(divide="ignore"):
        return np.exp(exponent * np.log1p(-squares))


def marginal_pdf(z: ArrayLike, n: int) -> Union[float, np.ndarray]:
    """
    Density of one cartesian component of an isotropic unit vector of R^n:
    (1 - z^2)^((n-3)/2) Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2)).

    The prefactor is evaluated through log-gamma so very large n does not overflow.
    For n = 2 the density diverges at |z| = 1 and +inf is returned there.

    Raises:
        InvalidDimensionError: If n < 2.
        DomainError: If |z| > 1.
    """
    n = _require_dimension(n, 2)
    values = np.asarray(z, dtype=float)
    if np.any(np.abs(values) > 1.0) or np.any(np.isnan(values)):
        raise DomainError("marginal_pdf is defined for -1 <= z <= 1 only.")
    density = np.exp(_log_sphere_area_ratio(n, 1)) * _power_of_complement(values ** 2, (n - 3) / 2.0)
    return float(density) if density.ndim == 0 else density


def moment(n: int, order: int) -> float:
    """
    Moments of a cartesian component of an isotropic unit vector of R^n:
    odd orders vanish, m2 = 1/n, m4 = 3/(n(n+2)).

    Raises:
        InvalidDimensionError: If n < 1.
        UnsupportedOrderError: If order is not in {1, 2, 3, 4}.
    """
    n = _require_dimension(n, 1)
    if order not in (1, 2, 3, 4):
        raise UnsupportedOrderError(f"Moment order must be 1, 2, 3 or 4, got {order!r}.")
    if order % 2:
        return 0.0
    if order == 2:
        return 1.0 / n
    return 3.0 / (n * (n + 2))


def complex_moment(N: int, order: int) -> float:
    """
    E|z_k|^order for an isotropic unit vector of C^N (order even).

    |z_k|^2 follows a Beta(1, N-1) law, so E|z_k|^(2j) = j! Gamma(N) / Gamma(N + j):
    1/N for order 2 and 2/(N(N+1)) for order 4.
    """
    N = _require_dimension(N, 1, "N")
    if not isinstance(order, (int, np.integer)) or order < 2 or order % 2:
        raise UnsupportedOrderError(f"Complex moment order must be a positive even integer, got {order!r}.")
    j = order // 2
    return float(np.exp(gammaln(j + 1) + gammaln(N) - gammaln(N + j)))


def complex_cross_moment(N: int) -> float:
    """E(|z_k|^2 |z_l|^2) = 1/(N(N+1)) for k != l in C^N."""
    N = _require_dimension(N, 2, "N")
    return 1.0 / (N * (N + 1))


def cross_square_moment(n: int) -> float:
    """
    Exact E(x^2 y^2) for two distinct cartesian components of an isotropic unit vector of R^n:
    1/(n(n+2)). Tends to m2^2 = 1/n^2 with an O(n^-3) gap.

    Raises:
        InvalidDimensionError: If n < 2.
    """
    n = _require_dimension(n, 2)
    return 1.0 / (n * (n + 2))


def joint_marginal_pdf(values: Sequence[float], n: int, coordinates: str = "cartesian") -> float:
    """
    Joint density of m < n components of an isotropic unit vector of R^n.

    ``coordinates="cartesian"``: the m components themselves, supported on the unit
    m-ball, |S^{n-m-1}|/|S^{n-1}| (1 - sum x_k^2)^((n-m-2)/2).

    ``coordinates="nested"``: successively normalised coordinates
    u_k = x_k / sqrt(1 - sum_{j<k} x_j^2), supported on the cube [-1, 1]^m, with the
    product form |S^{n-m-1}|/|S^{n-1}| prod_k (1 - u_k^2)^((n-k-3)/2), k = 0..m-1.

    Raises:
        InvalidMarginalError: If m >= n (or m == 0).
        DomainError: If a value lies outside [-1, 1] or, in cartesian form, the squares sum above 1.
    """
    n = _require_dimension(n, 2)
    x = np.asarray(values, dtype=float).ravel()
    m = x.size
    if m < 1 or m >= n:
        raise InvalidMarginalError(f"Need 1 <= m < n components, got m={m}, n={n}.")
    if np.any(np.abs(x) > 1.0) or np.any(np.isnan(x)):
        raise DomainError("Joint marginal arguments must lie in [-1, 1].")
    prefactor = np.exp(_log_sphere_area_ratio(n, m))
    if coordinates == "cartesian":
        squares = float(np.sum(x ** 2))
        if squares > 1.0 + 1e-15:
            raise DomainError(f"Sum of squares {squares!r} exceeds 1.")
        return float(prefactor * _power_of_complement(np.array(min(squares, 1.0)), (n - m - 2) / 2.0))
    if coordinates == "nested":
        exponents = (n - np.arange(m) - 3) / 2.0
        factors = [float(_power_of_complement(np.array(u * u), e)) for u, e in zip(x, exponents)]
        return float(prefactor * np.prod(factors))
    raise ValidationError(f"Unknown coordinate convention {coordinates!r}; use 'cartesian' or 'nested'.")


def first_component_samples(n: int, sample_count: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draws of one cartesian component of an isotropic unit vector of R^n.

    Uses x_1 = g_1 / sqrt(g_1^2 + chi2_{n-1}), which has exactly the law of the first
    coordinate of a normalised Gaussian vector without drawing all n coordinates.
    """
    n = _require_dimension(n, 2)
    g = rng.standard_normal(sample_count)
    rest = rng.chisquare(n - 1, sample_count)
    return g / np.sqrt(g * g + rest)


def gaussian_limit_distance(n: int, sample_count: int, rng: np.random.Generator) -> float:
    """
    Kolmogorov-Smirnov distance between the empirical law of one cartesian component
    and the normal law N(0, 1/n) (the exact second moment).

    Raises:
        InvalidDimensionError: If n < 2.
        ValidationError: If sample_count < 1.
    """
    n = _require_dimension(n, 2)
    if sample_count < 1:
        raise ValidationError(f"sample_count must be positive, got {sample_count}.", flag="--count")
    if n < 10:
        logger.debug(f"gaussian_limit_distance called with n={n}; the normal approximation is coarse below n=10.")
    samples = first_component_samples(n, sample_count, rng)
    result = stats.kstest(samples, "norm", args=(0.0, np.sqrt(1.0 / n)))
    return float(result.statistic)


# --- Ensemble service ---

class SphereService:
    """
    Generates batches of isotropic unit vectors with per-sample substreams, so
    row i of every batch is the same vector whatever the worker count.
    """

    def __init__(self, workers: Optional[int] = None, group_count: int = 32):
        self.workers = workers
        self.group_count = group_count
        logger.debug("SphereService initialized.")

    @staticmethod
    def draw(config: IsotropicSampleConfig, index: int) -> np.ndarray:
        """The sample with the given index as a plain array (real or complex)."""
        rng = sample_stream(config.seed, index)
        if config.field is Field.COMPLEX:
            return sample_complex_unit_vector(config.dimension, rng).components
        return sample_real_unit_vector(config.dimension, rng).components

    def sample(self, config: IsotropicSampleConfig) -> np.ndarray:
        """
        All ``config.sample_count`` samples as an (M, n) array, row i drawn from substream i.
        """
        logger.info(f"Sampling {config.sample_count} {config.field.value} unit vectors of dimension {config.dimension} (seed {config.seed}).")
        dtype = complex if config.field is Field.COMPLEX else float

        def run_group(bounds: Tuple[int, int]) -> np.ndarray:
            lo, hi = bounds
            block = np.empty((hi - lo, config.dimension), dtype=dtype)
            for row, index in enumerate(range(lo, hi)):
                block[row] = self.draw(config, index)
            return block

        blocks = ordered_map(run_group, partition(config.sample_count, self.group_count), self.workers)
        return np.concatenate(blocks, axis=0)
