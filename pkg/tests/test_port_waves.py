# tests/test_port_waves.py

import numpy as np
import pytest

from src.cli.errors import InvalidDimensionError, InvalidReferenceError, ShapeError
from src.domain.port_waves import PortState, WaveState
from src.services.port_wave_service import (
    WAVE_PAIRING_FACTOR,
    from_waves,
    lorentz_pairing,
    projectors,
    reciprocity_defect,
    to_waves,
    wave_pairing,
)


def random_state(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    i = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PortState(v, i)


class TestProjectors:

    @pytest.mark.parametrize("R", [1.0, 50.0, 377.0])
    def test_identities(self, R):
        plus, minus = projectors(R, 3)
        eye = np.eye(6)
        np.testing.assert_allclose(plus + minus, eye, atol=1e-14)
        np.testing.assert_allclose(plus @ plus, plus, atol=1e-14)
        np.testing.assert_allclose(minus @ minus, minus, atol=1e-14)
        np.testing.assert_allclose(plus @ minus, 0.0, atol=1e-14)
        np.testing.assert_allclose(minus @ plus, 0.0, atol=1e-14)

    def test_per_port_resistances(self):
        plus, minus = projectors([10.0, 75.0], 2)
        np.testing.assert_allclose(plus @ plus, plus, atol=1e-13)
        assert plus[0, 2] == pytest.approx(5.0)
        assert plus[1, 3] == pytest.approx(37.5)

    def test_projectors_are_read_only(self):
        plus, _ = projectors(50.0, 1)
        with pytest.raises(ValueError):
            plus[0, 0] = 3.0

    def test_invalid_arguments(self):
        with pytest.raises(InvalidReferenceError):
            projectors(0.0, 2)
        with pytest.raises(InvalidReferenceError):
            projectors(-5.0, 2)
        with pytest.raises(InvalidDimensionError):
            projectors(50.0, 0)
        with pytest.raises(ShapeError):
            projectors([1.0, 2.0, 3.0], 2)


class TestWaves:

    def test_zero_state(self):
        waves = to_waves(PortState(np.zeros(2), np.zeros(2)), 50.0)
        np.testing.assert_array_equal(waves.phi_plus, 0)
        np.testing.assert_array_equal(waves.phi_minus, 0)
        np.testing.assert_array_equal(from_waves(WaveState(np.zeros(2), np.zeros(2))).voltage, 0)

    def test_unit_forward_wave(self):
        R = 50.0
        v = np.array([np.sqrt(2 * R), 0.0])
        waves = to_waves(PortState(v, v / R), R)
        np.testing.assert_allclose(waves.phi_plus, [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(waves.phi_minus, [0.0, 0.0], atol=1e-15)

    def test_equal_waves_carry_no_current(self):
        state = from_waves(WaveState([0.3 + 0.1j], [0.3 + 0.1j], 75.0))
        assert state.current[0] == 0
        assert abs(state.voltage[0]) > 0

    @pytest.mark.parametrize("R", [1.0, 50.0, 377.0])
    def test_round_trips(self, rng, R):
        state = random_state(rng, 4)
        back = from_waves(to_waves(state, R))
        np.testing.assert_allclose(back.voltage, state.voltage, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(back.current, state.current, rtol=1e-12, atol=1e-12)
        waves = WaveState(state.voltage, state.current, R)
        again = to_waves(from_waves(waves), R)
        np.testing.assert_allclose(again.phi_plus, waves.phi_plus, atol=1e-12)
        np.testing.assert_allclose(again.phi_minus, waves.phi_minus, atol=1e-12)

    def test_waves_are_the_projected_voltages(self, rng):
        R = 50.0
        state = random_state(rng, 3)
        plus, minus = projectors(R, 3)
        np.testing.assert_allclose(to_waves(state, R).phi_plus, (plus @ state.stacked())[:3] / np.sqrt(2 * R),
                                   atol=1e-12)
        np.testing.assert_allclose(to_waves(state, R).phi_minus, (minus @ state.stacked())[:3] / np.sqrt(2 * R),
                                   atol=1e-12)

    def test_invalid_reference(self, rng):
        with pytest.raises(InvalidReferenceError):
            to_waves(random_state(rng, 2), 0.0)

    def test_mismatched_state(self):
        with pytest.raises(ShapeError):
            PortState(np.zeros(2), np.zeros(3))


class TestPairing:

    def test_unit_forward_against_unit_backward(self):
        a = from_waves(WaveState([1.0], [0.0], 50.0))
        b = from_waves(WaveState([0.0], [1.0], 50.0))
        assert lorentz_pairing(a, b, R=50.0) == pytest.approx(WAVE_PAIRING_FACTOR)

    @pytest.mark.parametrize("R", [1.0, 50.0, 377.0])
    def test_two_sided_identity(self, rng, R):
        for _ in range(1000):
            a, b = random_state(rng, 3), random_state(rng, 3)
            direct = lorentz_pairing(a, b)
            waves = WAVE_PAIRING_FACTOR * wave_pairing(to_waves(a, R), to_waves(b, R))
            assert abs(direct - waves) <= 1e-12 * max(1.0, abs(direct))

    def test_checked_pairing_uses_both_sides(self, rng):
        a, b = random_state(rng, 2), random_state(rng, 2)
        assert lorentz_pairing(a, b, R=[20.0, 80.0]) == lorentz_pairing(a, b)

    def test_antisymmetric_and_bilinear(self, rng):
        a, b, c = random_state(rng, 2), random_state(rng, 2), random_state(rng, 2)
        assert lorentz_pairing(a, b) == -lorentz_pairing(b, a)
        assert lorentz_pairing(a, a) == 0
        combined = PortState(a.voltage + 2j * c.voltage, a.current + 2j * c.current)
        expected = lorentz_pairing(a, b) + 2j * lorentz_pairing(c, b)
        assert lorentz_pairing(combined, b) == pytest.approx(expected, rel=1e-12)

    def test_port_count_mismatch(self, rng):
        with pytest.raises(ShapeError):
            lorentz_pairing(random_state(rng, 2), random_state(rng, 3))


class TestReciprocity:

    def test_symmetric_model_is_reciprocal(self, rng):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        A = g + g.T
        x_a, x_b = rng.standard_normal(4), rng.standard_normal(4) + 1j
        assert abs(reciprocity_defect(A, x_a, x_b)) <= 1e-12

    def test_asymmetric_model_is_not(self):
        A = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert reciprocity_defect(A, [1.0, 0.0], [0.0, 1.0]) == pytest.approx(-1.0)

    def test_shapes(self):
        with pytest.raises(ShapeError):
            reciprocity_defect(np.eye(2), [1.0, 0.0, 0.0], [1.0, 0.0])
