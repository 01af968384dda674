# tests/test_sphere.py

import numpy as np
import pytest
from scipy import integrate

from conftest import mean_with_se, se_bound
from src.cli.errors import DomainError, InvalidDimensionError, InvalidMarginalError, UnsupportedOrderError
from src.domain.sphere import Field, IsotropicSampleConfig
from src.services.sphere_service import (
    SphereService,
    complex_cross_moment,
    complex_moment,
    complex_unit_rows,
    cross_square_moment,
    first_component_samples,
    gaussian_limit_distance,
    joint_marginal_pdf,
    marginal_pdf,
    moment,
    sample_complex_unit_vector,
    sample_real_unit_vector,
)
from src.utils.substreams import sample_stream


class TestSampling:

    def test_real_vector_has_unit_norm(self, rng):
        for n in (1, 2, 5, 100):
            v = sample_real_unit_vector(n, rng)
            assert v.dimension == n
            assert abs(np.linalg.norm(v.components) - 1.0) <= 1e-12

    def test_complex_vector_has_unit_norm(self, rng):
        for N in (1, 3, 64):
            z = sample_complex_unit_vector(N, rng)
            assert z.components.dtype == complex
            assert abs(np.sqrt(np.sum(np.abs(z.components) ** 2)) - 1.0) <= 1e-12
            assert z.as_real().shape == (2 * N,)

    def test_zero_dimension_is_rejected(self, rng):
        with pytest.raises(InvalidDimensionError):
            sample_real_unit_vector(0, rng)
        with pytest.raises(InvalidDimensionError):
            sample_complex_unit_vector(0, rng)

    def test_zero_sphere_is_a_fair_coin(self):
        draws = np.array([sample_real_unit_vector(1, sample_stream(3, i)).components[0] for i in range(20000)])
        assert set(np.unique(draws)) <= {-1.0, 1.0}
        share, se = mean_with_se(draws > 0)
        assert abs(share - 0.5) <= se_bound(se)

    def test_equipartition_of_second_moment(self, rng):
        draws = np.array([sample_real_unit_vector(5, rng).components[0] ** 2 for _ in range(40000)])
        mean, se = mean_with_se(draws)
        assert abs(mean - 0.2) <= se_bound(se)

    def test_complex_rows_are_unit_vectors(self, rng):
        rows = complex_unit_rows(rng, 50, 7)
        assert rows.shape == (50, 7)
        np.testing.assert_allclose(np.linalg.norm(rows, axis=1), 1.0, atol=1e-12)


class TestClosedForms:

    @pytest.mark.parametrize("n", [2, 3, 10, 100, 1000])
    def test_real_moments(self, n):
        assert moment(n, 1) == 0.0
        assert moment(n, 3) == 0.0
        assert moment(n, 2) == pytest.approx(1.0 / n, rel=1e-12)
        assert moment(n, 4) == pytest.approx(3.0 / (n * (n + 2)), rel=1e-12)

    def test_unsupported_order(self):
        with pytest.raises(UnsupportedOrderError):
            moment(4, 5)
        with pytest.raises(UnsupportedOrderError):
            complex_moment(4, 3)

    @pytest.mark.parametrize("N", [1, 2, 8, 32])
    def test_complex_moments(self, N):
        assert complex_moment(N, 2) == pytest.approx(1.0 / N, rel=1e-12)
        assert complex_moment(N, 4) == pytest.approx(2.0 / (N * (N + 1)), rel=1e-12)

    def test_complex_fourth_moment_approaches_gaussian_value(self):
        residuals = [abs(N ** 2 * complex_moment(N, 4) - 2.0) for N in (8, 32, 128)]
        assert residuals[0] > residuals[1] > residuals[2]

    def test_cross_square_moment(self):
        assert cross_square_moment(2) == pytest.approx(1.0 / 8.0)
        assert cross_square_moment(10) == pytest.approx(1.0 / 120.0)
        assert complex_cross_moment(4) == pytest.approx(1.0 / 20.0)
        with pytest.raises(InvalidDimensionError):
            cross_square_moment(1)

    def test_cross_square_moment_by_monte_carlo(self, rng):
        g = rng.standard_normal((100000, 6))
        x = g / np.linalg.norm(g, axis=1, keepdims=True)
        mean, se = mean_with_se(x[:, 0] ** 2 * x[:, 1] ** 2)
        assert abs(mean - cross_square_moment(6)) <= se_bound(se)


class TestMarginalDensity:

    @pytest.mark.parametrize("n", [3, 4, 10, 50, 200])
    def test_marginal_normalises(self, n):
        total, _ = integrate.quad(lambda z: marginal_pdf(z, n), -1.0, 1.0)
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_marginal_second_moment_matches_closed_form(self):
        value, _ = integrate.quad(lambda z: z * z * marginal_pdf(z, 7), -1.0, 1.0)
        assert value == pytest.approx(moment(7, 2), abs=1e-10)

    def test_marginal_edge_cases(self):
        assert marginal_pdf(1.0, 3) == pytest.approx(0.5)
        assert marginal_pdf(1.0, 2) == np.inf
        assert marginal_pdf(1.0, 5) == 0.0
        assert np.isfinite(marginal_pdf(0.0, 100000))
        with pytest.raises(DomainError):
            marginal_pdf(1.5, 4)
        with pytest.raises(InvalidDimensionError):
            marginal_pdf(0.0, 1)

    def test_cartesian_joint_marginal_normalises(self):
        n = 6

        def density(y, x):
            if x * x + y * y >= 1.0:
                return 0.0
            return joint_marginal_pdf([x, y], n)

        total, _ = integrate.dblquad(density, -1.0, 1.0, lambda x: -np.sqrt(1 - x * x), lambda x: np.sqrt(1 - x * x))
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_nested_joint_marginal_normalises(self):
        n = 6
        total, _ = integrate.dblquad(lambda u2, u1: joint_marginal_pdf([u1, u2], n, coordinates="nested"),
                                     -1.0, 1.0, -1.0, 1.0)
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_joint_marginal_of_one_component_is_the_marginal(self):
        assert joint_marginal_pdf([0.3], 9) == pytest.approx(marginal_pdf(0.3, 9), rel=1e-12)

    def test_joint_marginal_rejects_too_many_components(self):
        with pytest.raises(InvalidMarginalError):
            joint_marginal_pdf([0.1, 0.1, 0.1], 3)
        with pytest.raises(DomainError):
            joint_marginal_pdf([0.9, 0.9], 5)


class TestGaussianLimit:

    def test_first_component_law(self, rng):
        draws = first_component_samples(10, 100000, rng)
        mean, se = mean_with_se(draws ** 2)
        assert abs(mean - 0.1) <= se_bound(se)

    @pytest.mark.slow
    def test_ks_distance_small_at_large_n(self, rng):
        assert gaussian_limit_distance(400, 100000, rng) <= 0.01

    def test_distance_shrinks_as_the_dimension_grows(self, rng_factory):
        distances = [gaussian_limit_distance(n, 1000000, rng_factory(n)) for n in (4, 40, 400)]
        assert distances[0] > distances[1] > distances[2]
        assert distances[0] >= 3.0 * distances[2]

    def test_huge_dimension_leaves_only_sampling_noise(self, rng):
        assert gaussian_limit_distance(1000000, 1000, rng) < 1.95 / np.sqrt(1000) * 1.5

    def test_small_dimension_is_rejected(self, rng):
        with pytest.raises(InvalidDimensionError):
            gaussian_limit_distance(1, 100, rng)


class TestSphereService:

    def test_rows_match_single_draws(self):
        config = IsotropicSampleConfig(dimension=4, field=Field.COMPLEX, seed=11, sample_count=40)
        batch = SphereService(workers=1, group_count=7).sample(config)
        assert batch.shape == (40, 4)
        for i in (0, 13, 39):
            np.testing.assert_array_equal(batch[i], SphereService.draw(config, i))

    def test_worker_count_does_not_change_samples(self):
        config = IsotropicSampleConfig(dimension=5, field="real", seed=2, sample_count=100)
        single = SphereService(workers=1).sample(config)
        many = SphereService(workers=8).sample(config)
        np.testing.assert_array_equal(single, many)

    @pytest.mark.parametrize("N", [2, 8, 32])
    def test_complex_second_moment(self, N):
        config = IsotropicSampleConfig(dimension=N, field="complex", seed=N, sample_count=20000)
        samples = SphereService(workers=2).sample(config)
        mean, se = mean_with_se(np.abs(samples[:, 0]) ** 2)
        assert abs(mean - 1.0 / N) <= se_bound(se)
        fourth, se4 = mean_with_se(np.abs(samples[:, 0]) ** 4)
        assert abs(fourth - complex_moment(N, 4)) <= se_bound(se4)

    def test_config_validation(self):
        with pytest.raises(InvalidDimensionError):
            IsotropicSampleConfig(dimension=0, field="real", seed=0, sample_count=1)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [4, 16, 64])
    def test_real_moments_by_monte_carlo(self, n):
        config = IsotropicSampleConfig(dimension=n, field="real", seed=n, sample_count=200000)
        first = SphereService(workers=4).sample(config)[:, 0]
        second, se2 = mean_with_se(first ** 2)
        assert abs(second - moment(n, 2)) <= se_bound(se2)
        fourth, se4 = mean_with_se(first ** 4)
        assert abs(fourth - moment(n, 4)) <= se_bound(se4)
