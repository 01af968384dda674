# tests/test_estimator.py

import numpy as np
import pytest

from src.cli.errors import DomainError, IndexRangeError, InsufficientDataError, InvalidDimensionError, ModelError
from src.domain.ensemble import SieConfig
from src.domain.estimator import CouplingEstimate, PortModelType, PortNormModel
from src.domain.network import NetworkRecord, SweepDataset
from src.services.estimator_service import (
    EstimatorService,
    estimate_rho,
    estimate_rho_from_reference,
    port_norm,
    port_norm_from_reflection_variance,
    predict_coupling_variance,
    predict_cross_variance,
    rho_half_width,
)
from src.services.multiport_service import make_orthogonal_port_forms
from src.services.sweep_service import SweepService, frequency_grid


class TestRho:

    def test_known_variance(self):
        samples = np.array([1.0, -1.0, 1j, -1j])
        # mean zero, sum |z|^2 = 4, unbiased divisor 3
        assert estimate_rho(samples) == pytest.approx(np.sqrt(4.0 / 3.0))

    def test_needs_two_samples(self):
        with pytest.raises(InsufficientDataError):
            estimate_rho([0.5])

    def test_constant_samples_give_zero(self):
        assert estimate_rho([0.2 + 0.1j] * 5) == pytest.approx(0.0, abs=1e-15)

    def test_half_width(self, rng):
        z = rng.standard_normal(400) + 1j * rng.standard_normal(400)
        width = rho_half_width(z)
        assert 0.0 < width < 0.5
        assert np.isnan(rho_half_width([1.0, 2.0]))


class TestPortNorms:

    def test_models(self):
        assert port_norm(PortNormModel(PortModelType.THEVENIN, radiation_resistance=73.0)) == 73.0
        assert port_norm(PortNormModel("norton", radiation_conductance=0.01)) == 0.01
        assert port_norm(PortNormModel("scattering", reflection=0.6, efficiency=0.5)) == pytest.approx(0.32)
        assert port_norm(PortNormModel.matched_lossless()) == 1.0

    def test_invalid_models(self):
        with pytest.raises(ModelError):
            PortNormModel("thevenin")
        with pytest.raises(ModelError):
            PortNormModel("scattering", reflection=1.2)
        with pytest.raises(ModelError):
            PortNormModel("scattering", reflection=0.1, efficiency=0.0)
        with pytest.raises(ModelError):
            PortNormModel("smith")

    def test_fully_mismatched_reference_radiates_nothing(self):
        dead = PortNormModel("scattering", reflection=1.0)
        with pytest.raises(DomainError):
            estimate_rho_from_reference([0.1, 0.2, 0.3], dead, PortNormModel.matched_lossless())

    def test_norm_from_reflection_variance_inverts_prediction(self):
        norm_sq, rho, N = 0.7, 0.9, 64
        var_pp = 2 * norm_sq ** 2 * rho ** 2 / N
        assert port_norm_from_reflection_variance(var_pp, rho, N) == pytest.approx(norm_sq)
        with pytest.raises(DomainError):
            port_norm_from_reflection_variance(-1.0, rho, N)
        with pytest.raises(DomainError):
            port_norm_from_reflection_variance(1.0, 0.0, N)


class TestPredictions:

    def test_cross_variance(self):
        assert predict_cross_variance(4.0, 1.0) == pytest.approx(1.0)
        assert predict_cross_variance(0.0, 3.0) == 0.0
        with pytest.raises(DomainError):
            predict_cross_variance(-1.0, 1.0)

    def test_coupling_variance(self):
        assert predict_coupling_variance(2.0, 0.5, 0.5, 10) == pytest.approx(0.025)
        with pytest.raises(InvalidDimensionError):
            predict_coupling_variance(1.0, 1.0, 1.0, 0)


class TestReferenceEstimate:

    def test_mismatch_correction(self, rng):
        z = rng.standard_normal(500) + 1j * rng.standard_normal(500)
        ideal = estimate_rho_from_reference(z, PortNormModel.matched_lossless(), PortNormModel.matched_lossless(), N=16)
        lossy = PortNormModel("scattering", reflection=0.0, efficiency=0.25)
        corrected = estimate_rho_from_reference(z, lossy, PortNormModel.matched_lossless())
        assert corrected.rho_hat == pytest.approx(2.0 * ideal.rho_hat)
        assert ideal.rho_hat_normalized == pytest.approx(4.0 * ideal.rho_hat)
        assert corrected.rho_hat_normalized is None
        assert ideal.sample_count == 500

    def test_relative_residual(self):
        estimate = CouplingEstimate(rho_hat=0.1, rho_half_width=0.01, predicted_cross_variance=0.9,
                                    empirical_cross_variance=1.0)
        assert estimate.relative_residual == pytest.approx(0.1)
        assert set(estimate.to_dict()) >= {"freq_hz", "rho_hat", "rel_residual"}


class TestEstimatorService:

    def test_closed_loop_recovers_rho(self):
        N, rho = 16, 0.6
        forms = make_orthogonal_port_forms(2, N, None, np.random.default_rng(1))
        sweep = SweepService(workers=2).synthesize_sweep(SieConfig(dimension=N, rho=rho), forms, 400,
                                                         frequency_grid(3), seed=5)
        estimates = EstimatorService().estimate_sweep(sweep, (1, 2), N=N)
        assert len(estimates) == 3
        exact = rho * np.sqrt(N / (N + 1))
        for estimate in estimates:
            assert abs(estimate.rho_hat_normalized - exact) <= 5 * estimate.rho_half_width / 1.96 * np.sqrt(N)
            assert estimate.sample_count == 400
            assert estimate.var_pp > estimate.empirical_cross_variance

    def test_port_validation(self, two_port_sweep):
        service = EstimatorService()
        with pytest.raises(IndexRangeError):
            service.estimate_sweep(two_port_sweep, (1, 3))

    def test_needs_two_stir_states(self):
        single = SweepDataset(stir_states=[[NetworkRecord(1e9, np.eye(2))]])
        with pytest.raises(InsufficientDataError):
            EstimatorService().estimate_sweep(single)

    def test_two_stir_states_have_no_interval(self, two_port_sweep):
        pair = SweepDataset(stir_states=two_port_sweep.stir_states[:2])
        estimates = EstimatorService().estimate_sweep(pair)
        assert all(np.isnan(e.rho_half_width) for e in estimates)

    def test_reference_ports_per_call(self, two_port_sweep):
        lossy = (PortNormModel(PortModelType.SCATTERING, reflection=0.3, efficiency=0.5),
                 PortNormModel(PortModelType.SCATTERING, reflection=0.0, efficiency=0.8))
        configured = EstimatorService(lossy).estimate_sweep(two_port_sweep)
        per_call = EstimatorService().estimate_sweep(two_port_sweep, reference_ports=lossy)
        matched = EstimatorService().estimate_sweep(two_port_sweep)
        assert [e.rho_hat for e in per_call] == [e.rho_hat for e in configured]
        assert per_call[0].rho_hat != matched[0].rho_hat
