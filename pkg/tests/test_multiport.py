# tests/test_multiport.py

import numpy as np
import pytest

from src.cli.errors import (
    ConfigurationError,
    DegenerateEnsembleError,
    IndexRangeError,
    InfeasibleOrthogonalityError,
    ShapeError,
    ValidationError,
)
from src.domain.ensemble import ScatteringMatrix, SieConfig
from src.domain.multiport import ModelType, Orthogonality, PerturbationMatrix, PortForms, VarianceTable
from src.services.ensemble_service import draw_terms, sample_sie
from src.services.multiport_service import (
    MultiportService,
    draw_perturbation,
    make_orthogonal_port_forms,
    perturb,
    perturb_terms,
    predicted_variances,
    universal_ratio_residual,
)
from src.utils.substreams import sample_stream


class TestPortForms:

    def test_generated_forms_are_orthogonal_with_requested_norms(self, rng):
        forms = make_orthogonal_port_forms(3, 10, [1.0, 2.0, 0.5], rng)
        np.testing.assert_allclose(forms.row_norms, [1.0, 2.0, 0.5], rtol=1e-12)
        assert forms.row_orthogonality_defect() <= 1e-12
        assert forms.port_count == 3 and forms.wave_dim == 10

    def test_real_part_mode_fits_twice_the_dimension(self, rng):
        forms = make_orthogonal_port_forms(4, 2, None, rng, mode="real_part")
        assert forms.orthogonality is Orthogonality.REAL_PART
        assert forms.row_orthogonality_defect() <= 1e-10
        with pytest.raises(InfeasibleOrthogonalityError):
            make_orthogonal_port_forms(5, 2, None, rng, mode="real_part")

    def test_too_many_ports(self, rng):
        with pytest.raises(InfeasibleOrthogonalityError):
            make_orthogonal_port_forms(3, 2, None, rng)

    def test_degenerate_rows_are_equal(self, rng):
        forms = make_orthogonal_port_forms(2, 6, None, rng, mode="degenerate")
        np.testing.assert_array_equal(forms.entries[0], forms.entries[1])
        assert forms.row_orthogonality_defect() == pytest.approx(1.0)

    def test_non_orthogonal_rows_are_rejected(self):
        rows = np.array([[1.0, 0.0], [1.0, 1.0]])
        with pytest.raises(ValidationError):
            PortForms(rows)
        assert PortForms(rows, Orthogonality.NONE).port_count == 2

    def test_invalid_norms_and_modes(self, rng):
        with pytest.raises(ValidationError):
            make_orthogonal_port_forms(2, 4, [1.0], rng)
        with pytest.raises(ValidationError):
            make_orthogonal_port_forms(2, 4, [1.0, 0.0], rng)
        with pytest.raises(ValidationError):
            make_orthogonal_port_forms(2, 4, None, rng, mode="sideways")
        with pytest.raises(ConfigurationError):
            PortForms(np.eye(2), "sideways")

    def test_scaled_rows_keep_orthogonality(self, rng):
        forms = make_orthogonal_port_forms(2, 5, None, rng).scaled_rows([3.0, 0.5])
        np.testing.assert_allclose(forms.row_norms, [3.0, 0.5])


class TestPerturbation:

    def test_symmetric_result(self, rng):
        config = SieConfig(dimension=6)
        forms = make_orthogonal_port_forms(3, 6, None, rng)
        delta = perturb(forms, sample_sie(config, rng))
        assert delta.is_symmetric(1e-12)
        assert delta.port_count == 3
        np.testing.assert_array_equal(delta.source_term, 0)

    def test_identity_forms_extract_the_block(self, rng):
        S = sample_sie(SieConfig(dimension=4), rng)
        forms = PortForms(np.eye(4)[:2])
        np.testing.assert_allclose(perturb(forms, S).entries, S.entries[:2, :2], atol=1e-15)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ShapeError):
            perturb(PortForms(np.eye(3)), ScatteringMatrix(np.eye(4)))

    def test_reduced_path_matches_full_product(self, rng):
        config = SieConfig(dimension=7, rho=0.5)
        forms = make_orthogonal_port_forms(2, 7, [1.0, 1.5], rng)
        via_matrix = perturb(forms, sample_sie(config, sample_stream(2, 9))).entries
        rows, s = draw_terms(config, sample_stream(2, 9))
        np.testing.assert_allclose(perturb_terms(forms, rows, s), via_matrix, rtol=1e-10, atol=1e-14)
        np.testing.assert_allclose(draw_perturbation(forms, config, sample_stream(2, 9)), via_matrix,
                                   rtol=1e-10, atol=1e-14)

    def test_linear_in_the_scattering_matrix(self, rng):
        config = SieConfig(dimension=8, rho=0.6)
        forms = make_orthogonal_port_forms(3, 8, [1.0, 2.0, 0.5], rng)
        s1, s2 = sample_sie(config, sample_stream(4, 0)), sample_sie(config, sample_stream(4, 1))
        total = perturb(forms, ScatteringMatrix(s1.entries + s2.entries)).entries
        parts = perturb(forms, s1).entries + perturb(forms, s2).entries
        np.testing.assert_allclose(total, parts, rtol=0, atol=1e-12)
        scaled = perturb(forms, ScatteringMatrix(-2.5 * s1.entries)).entries
        np.testing.assert_allclose(scaled, -2.5 * perturb(forms, s1).entries, rtol=0, atol=1e-12)

    def test_model_type_units(self):
        delta = PerturbationMatrix(np.zeros((2, 2)), ModelType.IMPEDANCE)
        assert delta.units == "ohm"
        assert PerturbationMatrix(np.zeros((1, 1))).units == "1"


class TestVarianceTable:

    def table(self, variances):
        v = np.asarray(variances, dtype=float)
        return VarianceTable(v, v, v, np.zeros_like(v), 100)

    def test_residual_of_the_ideal_table(self):
        assert self.table([[2.0, 1.0], [1.0, 2.0]]).universal_ratio_residual(1, 2) == pytest.approx(0.0)
        assert universal_ratio_residual(self.table([[2.0, 0.5], [0.5, 2.0]]), 1, 2) == pytest.approx(1.0)

    def test_residual_errors(self):
        table = self.table([[2.0, 0.0], [0.0, 2.0]])
        with pytest.raises(DegenerateEnsembleError):
            table.universal_ratio_residual(1, 2)
        with pytest.raises(ValidationError):
            table.universal_ratio_residual(1, 1)
        with pytest.raises(IndexRangeError):
            table.universal_ratio_residual(1, 3)

    def test_theoretical_table(self, rng):
        forms = make_orthogonal_port_forms(2, 8, [1.0, 2.0], rng)
        asymptotic, exact = predicted_variances(forms, SieConfig(dimension=8, rho=0.5))
        assert asymptotic[0, 1] == pytest.approx(4.0 * 0.25 / 8)
        assert asymptotic[1, 1] == pytest.approx(2 * 16.0 * 0.25 / 8)
        assert exact[0, 1] == pytest.approx(4.0 * 0.25 * 8 / 72)
        table = VarianceTable(asymptotic, asymptotic, exact, np.zeros((2, 2)), 0)
        assert table.theoretical().universal_ratio_residual(1, 2) == pytest.approx(0.0, abs=1e-12)


class TestEnsembleVariance:

    def test_matches_exact_prediction(self, rng):
        config = SieConfig(dimension=12, rho=0.7)
        forms = make_orthogonal_port_forms(3, 12, [1.0, 0.5, 2.0], rng)
        table = MultiportService(workers=2).ensemble_variance(forms, config, 10000, seed=4)
        assert table.sample_count == 10000
        np.testing.assert_array_equal(table.variances, table.variances.T)
        deviation = np.abs(table.variances - table.predicted_exact)
        assert np.all(deviation <= 5.0 * table.standard_errors + 1e-15)

    def test_worker_invariance(self, rng):
        config = SieConfig(dimension=6)
        forms = make_orthogonal_port_forms(2, 6, None, rng)
        a = MultiportService(workers=1).ensemble_variance(forms, config, 200, seed=1)
        b = MultiportService(workers=8).ensemble_variance(forms, config, 200, seed=1)
        np.testing.assert_array_equal(a.variances, b.variances)
        np.testing.assert_array_equal(a.standard_errors, b.standard_errors)

    def test_variances_scale_with_the_fourth_power_of_the_norms(self, rng):
        config = SieConfig(dimension=10, rho=0.8)
        unit = make_orthogonal_port_forms(2, 10, None, rng)
        service = MultiportService(workers=2)
        base = service.ensemble_variance(unit, config, 500, seed=6)
        scaled = service.ensemble_variance(unit.scaled_rows([2.0, 3.0]), config, 500, seed=6)
        np.testing.assert_allclose(scaled.variances[0, 1], 36.0 * base.variances[0, 1], rtol=1e-9)
        np.testing.assert_allclose(scaled.variances[0, 0], 16.0 * base.variances[0, 0], rtol=1e-9)
        np.testing.assert_allclose(scaled.variances[1, 1], 81.0 * base.variances[1, 1], rtol=1e-9)

    def test_validation(self, rng):
        forms = make_orthogonal_port_forms(2, 6, None, rng)
        service = MultiportService()
        with pytest.raises(ShapeError):
            service.ensemble_variance(forms, SieConfig(dimension=7), 100, seed=0)
        with pytest.raises(ValidationError):
            service.ensemble_variance(forms, SieConfig(dimension=6), 50, seed=0)

    @pytest.mark.slow
    def test_universal_ratio_holds_for_orthogonal_ports(self):
        config = SieConfig(dimension=64, rho=1.0)
        forms = make_orthogonal_port_forms(2, 64, None, np.random.default_rng(7))
        table = MultiportService(workers=4).ensemble_variance(forms, config, 100000, seed=7)
        assert table.universal_ratio_residual(1, 2) <= 0.05

    @pytest.mark.slow
    def test_residual_fails_for_identical_ports(self):
        config = SieConfig(dimension=64, rho=1.0)
        forms = make_orthogonal_port_forms(2, 64, None, np.random.default_rng(7), mode="degenerate")
        table = MultiportService(workers=4).ensemble_variance(forms, config, 100000, seed=7)
        assert table.universal_ratio_residual(1, 2) > 0.2

    def test_identical_ports_residual_is_one_half(self):
        config = SieConfig(dimension=16, rho=1.0)
        forms = make_orthogonal_port_forms(2, 16, None, np.random.default_rng(3), mode="degenerate")
        table = MultiportService(workers=2).ensemble_variance(forms, config, 4000, seed=3)
        residual = table.universal_ratio_residual(1, 2)
        assert residual == pytest.approx(0.5, abs=0.05)

    @pytest.mark.slow
    def test_residual_is_sampling_noise_at_every_dimension(self):
        def mean_residual(N):
            values = []
            for seed in range(20):
                forms = make_orthogonal_port_forms(2, N, None, np.random.default_rng(seed))
                table = MultiportService(workers=4).ensemble_variance(forms, SieConfig(dimension=N), 2000, seed=seed)
                values.append(table.universal_ratio_residual(1, 2))
            return float(np.mean(values))

        # the ratio is exact at finite N, so only the Monte Carlo noise (about 1/sqrt(M)) remains
        assert mean_residual(4) < 0.1
        assert mean_residual(256) < 0.1
