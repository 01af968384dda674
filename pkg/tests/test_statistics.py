# tests/test_statistics.py

import numpy as np
import pytest

from src.cli.errors import ConfigurationError, InsufficientDataError, ShapeError
from src.domain.accumulator import ComplexAccumulator, CovarianceAccumulator
from src.utils.parallel import ordered_map, resolve_workers
from src.utils.statistics import (
    complex_variance,
    covariance_pair,
    grouped_jackknife,
    jackknife,
    leave_one_out_variances,
    merge_all,
    standard_error_bound,
)
from src.utils.substreams import master_stream, partition, sample_stream, validate_seed


def complex_samples(rng, size, shape=()):
    return rng.standard_normal((size,) + shape) + 1j * rng.standard_normal((size,) + shape)


class TestComplexAccumulator:

    def test_push_matches_batch_variance(self, rng):
        z = complex_samples(rng, 500)
        acc = ComplexAccumulator()
        for value in z:
            acc.push(value)
        assert acc.count == 500
        assert float(acc.variance()) == pytest.approx(float(complex_variance(z)), rel=1e-12)
        assert complex(acc.mean) == pytest.approx(complex(z.mean()), rel=1e-12)

    def test_merge_equals_concatenation(self, rng):
        z = complex_samples(rng, 300, (2, 2))
        left = ComplexAccumulator((2, 2)).push_batch(z[:120])
        right = ComplexAccumulator((2, 2)).push_batch(z[120:])
        merged = left.merge(right)
        np.testing.assert_allclose(merged.variance(), complex_variance(z), rtol=1e-12)
        assert merged.count == 300

    def test_merge_with_empty(self, rng):
        acc = ComplexAccumulator().push_batch(complex_samples(rng, 10))
        assert acc.merge(ComplexAccumulator()).count == 10
        assert ComplexAccumulator().merge(acc).count == 10

    def test_too_few_samples(self):
        with pytest.raises(InsufficientDataError):
            ComplexAccumulator().push(1.0).variance()

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            ComplexAccumulator((2,)).push(np.zeros(3))
        with pytest.raises(ShapeError):
            ComplexAccumulator((2,)).merge(ComplexAccumulator((3,)))


class TestCovarianceAccumulator:

    def test_streaming_matches_direct(self, rng):
        u = complex_samples(rng, 400)
        v = 0.5 * u + complex_samples(rng, 400)
        acc = CovarianceAccumulator()
        for a, b in zip(u, v):
            acc.push(a, b)
        direct = np.sum((u - u.mean()) * np.conj(v - v.mean())) / 399
        assert complex(acc.covariance()) == pytest.approx(direct, rel=1e-10)
        assert covariance_pair(u, v) == pytest.approx(direct, rel=1e-10)

    def test_merge_is_exact(self, rng):
        u, v = complex_samples(rng, 200, (3,)), complex_samples(rng, 200, (3,))
        whole = CovarianceAccumulator((3,)).push_batch(u, v)
        parts = merge_all([CovarianceAccumulator((3,)).push_batch(u[a:b], v[a:b]) for a, b in partition(200, 6)])
        np.testing.assert_allclose(parts.covariance(), whole.covariance(), rtol=1e-10)

    def test_pair_length_mismatch(self):
        with pytest.raises(ShapeError):
            covariance_pair([1, 2, 3], [1, 2])
        with pytest.raises(InsufficientDataError):
            covariance_pair([1], [1])


class TestJackknife:

    def test_leave_one_out_variances(self, rng):
        z = complex_samples(rng, 12)
        fast = leave_one_out_variances(z)
        slow = [complex_variance(np.delete(z, i)) for i in range(12)]
        np.testing.assert_allclose(fast, slow, rtol=1e-10)

    def test_jackknife_of_the_mean_is_the_standard_error(self, rng):
        x = rng.standard_normal(200)
        value, se = jackknife(x, np.mean)
        assert value == pytest.approx(x.mean())
        assert se == pytest.approx(x.std(ddof=1) / np.sqrt(200), rel=1e-10)

    def test_grouped_jackknife_total_equals_merged(self, rng):
        z = complex_samples(rng, 640)
        groups = [ComplexAccumulator().push_batch(z[a:b]) for a, b in partition(640, 32)]
        total, se = grouped_jackknife(groups, lambda acc: acc.variance())
        assert float(total) == pytest.approx(float(complex_variance(z)), rel=1e-12)
        # the variance of a unit complex Gaussian has standard error about sqrt(1/M) * var
        assert 0.5 * 2 / np.sqrt(640) < float(se) < 2.0 * 2 / np.sqrt(640)

    def test_standard_error_bound(self):
        assert standard_error_bound(0.1) == pytest.approx(0.5)
        assert standard_error_bound(0.1, k=3) == pytest.approx(0.3)


class TestSubstreams:

    def test_stream_is_a_pure_function_of_its_key(self):
        a = sample_stream(7, 3).standard_normal(4)
        b = sample_stream(7, 3).standard_normal(4)
        c = sample_stream(7, 4).standard_normal(4)
        d = sample_stream(7, 3, 1).standard_normal(4)
        np.testing.assert_array_equal(a, b)
        assert not np.array_equal(a, c)
        assert not np.array_equal(a, d)

    def test_master_stream_differs_from_sample_streams(self):
        assert not np.array_equal(master_stream(1, 0).random(3), sample_stream(1, 0).random(3))

    def test_seed_range(self):
        assert validate_seed(2 ** 64 - 1) == 2 ** 64 - 1
        with pytest.raises(ConfigurationError):
            validate_seed(-1)
        with pytest.raises(ConfigurationError):
            validate_seed(2 ** 64)

    @pytest.mark.parametrize("count,groups", [(10, 3), (100, 32), (5, 32), (1, 4)])
    def test_partition_covers_range(self, count, groups):
        bounds = partition(count, groups)
        assert bounds[0][0] == 0 and bounds[-1][1] == count
        assert all(hi > lo for lo, hi in bounds)
        assert all(a[1] == b[0] for a, b in zip(bounds, bounds[1:]))
        assert len(bounds) == min(count, groups)

    def test_empty_partition(self):
        assert partition(0, 4) == []


class TestOrderedMap:

    def test_results_keep_input_order(self):
        items = list(range(50))
        assert ordered_map(lambda x: x * x, items, workers=8) == [x * x for x in items]
        assert ordered_map(lambda x: x * x, items, workers=1) == [x * x for x in items]

    def test_resolve_workers(self):
        assert resolve_workers(3) == 3
        assert resolve_workers(0) == 1
        assert resolve_workers(None) >= 1
