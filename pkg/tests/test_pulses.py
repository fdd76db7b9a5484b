import json

import numpy as np
import pytest

from geogate.evolution import propagate
from geogate.pulses import (
    GateFamily,
    GateParams,
    PulseSegment,
    PulseSequence,
    conventional_sequence,
    dynamical_rotation,
    gate_sequence,
    named_rotation,
    optimized_sequence,
    rotation_to_gate_params,
    target_unitary,
    two_pi_sequence,
    xyx_decompose,
    xyx_sequence,
)
from geogate.su2 import PAULI_X, PAULI_Y, IDENTITY, su2_exp, trace_fidelity

from conftest import random_axis, random_su2


def segment_table(seq):
    return [(seg.area, seg.phase) for seg in seq.segments]


class TestSchedules:
    def test_conventional_literal_substitution(self):
        seq = conventional_sequence(GateParams(np.pi / 2, 0.0, -np.pi / 4))
        expected = [
            (np.pi / 2, -np.pi / 2),
            (np.pi, np.pi / 4),
            (np.pi / 2, -np.pi / 2),
        ]
        assert np.allclose(segment_table(seq), expected)
        assert seq.total_area == pytest.approx(2 * np.pi)

    def test_conventional_degenerate_z_axis(self):
        seq = conventional_sequence(GateParams(0.0, 0.0, 0.3))
        assert seq.segments[0].area == 0.0
        assert seq.total_area == pytest.approx(2 * np.pi)

    def test_optimized_literal_substitution(self):
        seq = optimized_sequence(GateParams(np.pi / 2, 0.0, -np.pi / 4))
        assert segment_table(seq)[2] == pytest.approx((np.pi, 5 * np.pi / 4))
        assert seq.total_area == pytest.approx(3 * np.pi)
        assert not any(seg.delta_suppressed for seg in seq.segments)

    def test_optimized_perfect_pi_flag(self):
        seq = optimized_sequence(GateParams(np.pi / 2, 0.0, -np.pi / 4), perfect_pi=True)
        flags = [seg.delta_suppressed for seg in seq.segments]
        assert flags == [False, False, True, False, False]

    def test_two_pi_literal_substitution(self):
        seq = two_pi_sequence(GateParams(np.pi / 4, 0.0, np.pi / 2))
        areas = [seg.area for seg in seq.segments]
        phases = [seg.phase for seg in seq.segments]
        assert np.allclose(
            areas, [np.pi / 4, np.pi / 2, np.pi, np.pi / 2, np.pi / 2, np.pi, np.pi / 4]
        )
        assert np.allclose(
            phases, [-np.pi / 2, np.pi, 3 * np.pi / 2, np.pi, -np.pi / 2, 0.0, -np.pi / 2]
        )
        assert seq.total_area == pytest.approx(4 * np.pi)

    def test_two_pi_domain(self):
        with pytest.raises(ValueError):
            two_pi_sequence(GateParams(np.pi / 2 + 0.1, 0.0, 0.0))
        # theta = 0 degenerate but valid
        seq = two_pi_sequence(GateParams(0.0, 0.0, 0.5))
        assert seq.segments[0].area == 0.0


class TestPropagationOracles:
    """Noiseless propagation of every family against its target unitary."""

    def test_conventional_matches_target(self, rng):
        for _ in range(50):
            params = GateParams(
                rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi), rng.uniform(-np.pi, np.pi)
            )
            fid = trace_fidelity(target_unitary(params), propagate(conventional_sequence(params)))
            assert fid >= 1 - 1e-10

    def test_optimized_matches_target_with_spinor_flip(self, rng):
        """The 3*pi loop equals minus the target exactly (odd pi-count)."""
        for _ in range(50):
            params = GateParams(
                rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi), rng.uniform(-np.pi, np.pi)
            )
            actual = propagate(optimized_sequence(params))
            assert np.max(np.abs(actual + target_unitary(params))) <= 1e-10

    def test_two_pi_matches_target_exactly(self, rng):
        for _ in range(50):
            params = GateParams(
                rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi), rng.uniform(-np.pi, np.pi)
            )
            actual = propagate(two_pi_sequence(params))
            assert np.max(np.abs(actual - target_unitary(params))) <= 1e-10

    def test_conventional_and_optimized_same_gate(self, rng):
        for _ in range(20):
            params = GateParams(
                rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi), rng.uniform(-np.pi, np.pi)
            )
            conv = propagate(conventional_sequence(params))
            opt = propagate(optimized_sequence(params))
            assert trace_fidelity(conv, opt) >= 1 - 1e-12


class TestDynamicalRotation:
    def test_x_half(self):
        seq = dynamical_rotation(0.0, np.pi / 2)
        assert segment_table(seq) == [(np.pi / 2, 0.0)]
        assert np.allclose(propagate(seq), su2_exp(np.array([1.0, 0, 0]), np.pi / 2))

    def test_pi_about_y(self):
        seq = dynamical_rotation(np.pi / 2, np.pi)
        assert np.allclose(propagate(seq), -1j * PAULI_Y, atol=1e-12)

    def test_negative_angle_folds_phase(self):
        seq = dynamical_rotation(0.0, -np.pi / 2)
        assert segment_table(seq) == [(np.pi / 2, np.pi)]
        expected = su2_exp(np.array([1.0, 0, 0]), -np.pi / 2)
        assert np.max(np.abs(propagate(seq) - expected)) <= 1e-12


class TestXYX:
    def test_pure_x_rotation(self):
        chi_a, chi_b, chi_c = xyx_decompose(su2_exp(np.array([1.0, 0, 0]), np.pi / 2))
        assert chi_a == pytest.approx(np.pi / 2, abs=1e-12)
        assert chi_b == pytest.approx(0.0, abs=1e-12)
        assert chi_c == pytest.approx(0.0, abs=1e-12)

    def test_identity(self):
        chis = xyx_decompose(IDENTITY)
        assert np.allclose(chis, 0.0, atol=1e-12)

    def test_z_half_by_recomposition(self):
        target = su2_exp(np.array([0.0, 0, 1.0]), np.pi / 2)
        chi_a, chi_b, chi_c = xyx_decompose(target)
        recomposed = (
            su2_exp(np.array([1.0, 0, 0]), chi_c)
            @ su2_exp(np.array([0.0, 1.0, 0]), chi_b)
            @ su2_exp(np.array([1.0, 0, 0]), chi_a)
        )
        assert trace_fidelity(target, recomposed) >= 1 - 1e-10

    def test_recomposition_property(self, rng):
        for _ in range(200):
            target = random_su2(rng)
            chi_a, chi_b, chi_c = xyx_decompose(target)
            recomposed = (
                su2_exp(np.array([1.0, 0, 0]), chi_c)
                @ su2_exp(np.array([0.0, 1.0, 0]), chi_b)
                @ su2_exp(np.array([1.0, 0, 0]), chi_a)
            )
            assert trace_fidelity(target, recomposed) >= 1 - 1e-10

    def test_xyx_sequence_propagates_to_target(self, rng):
        for _ in range(50):
            target = random_su2(rng)
            assert trace_fidelity(target, propagate(xyx_sequence(target))) >= 1 - 1e-10


class TestTargetUnitary:
    def test_gamma_zero_is_identity(self):
        assert np.allclose(target_unitary(GateParams(0.3, 1.1, 0.0)), IDENTITY)

    def test_half_pi_gamma_x_axis(self):
        u = target_unitary(GateParams(np.pi / 2, 0.0, np.pi / 2))
        assert np.allclose(u, 1j * PAULI_X, atol=1e-12)

    def test_exponential_identity(self):
        params = GateParams(np.pi / 3, np.pi / 5, 0.7)
        expected = su2_exp(params.axis(), -2 * 0.7)
        assert np.max(np.abs(target_unitary(params) - expected)) <= 1e-12


class TestRotationToGateParams:
    def test_z_axis_convention(self):
        params = rotation_to_gate_params(np.array([0.0, 0, 1.0]), np.pi / 2)
        assert params.theta == pytest.approx(0.0)
        assert params.phi == 0.0
        assert params.gamma == pytest.approx(-np.pi / 4)

    def test_x_axis(self):
        params = rotation_to_gate_params(np.array([1.0, 0, 0]), np.pi / 2)
        assert params.theta == pytest.approx(np.pi / 2)
        assert params.phi == pytest.approx(0.0)
        assert params.gamma == pytest.approx(-np.pi / 4)

    def test_round_trip_property(self, rng):
        for _ in range(100):
            axis = random_axis(rng)
            chi = rng.uniform(-np.pi, np.pi)
            params = rotation_to_gate_params(axis, chi)
            fid = trace_fidelity(su2_exp(axis, chi), target_unitary(params))
            assert fid >= 1 - 1e-10


class TestGateSequence:
    def test_all_families_realize_rotation(self, rng):
        for _ in range(30):
            axis = random_axis(rng)
            chi = rng.uniform(-2 * np.pi, 2 * np.pi)
            target = su2_exp(axis, chi)
            for family in GateFamily:
                seq = gate_sequence(family, axis, chi)
                assert trace_fidelity(target, propagate(seq)) >= 1 - 1e-10, family

    def test_two_pi_handles_lower_hemisphere(self):
        seq = gate_sequence("twopi", np.array([0.0, 0, -1.0]), np.pi / 2)
        assert seq.params.theta <= np.pi / 2 + 1e-12


class TestSerialization:
    def test_json_round_trip(self):
        seq = optimized_sequence(GateParams(0.4, 1.2, -0.3), perfect_pi=True)
        restored = PulseSequence.from_json(seq.to_json())
        assert restored == seq

    def test_schema_fields(self):
        seq = conventional_sequence(GateParams(0.4, 1.2, -0.3))
        data = json.loads(seq.to_json())
        assert data["family"] == "geo"
        assert set(data["segments"][0]) == {"area", "phase", "rabi", "delta_suppressed"}


class TestValidation:
    def test_negative_area_rejected(self):
        with pytest.raises(ValueError):
            PulseSegment(-0.1, 0.0)

    def test_theta_range(self):
        with pytest.raises(ValueError):
            GateParams(3.3, 0.0, 0.0)

    def test_named_rotation(self):
        axis, chi = named_rotation("Y/4")
        assert np.allclose(axis, [0, 1, 0])
        assert chi == pytest.approx(np.pi / 4)
        with pytest.raises(ValueError):
            named_rotation("Q/2")
