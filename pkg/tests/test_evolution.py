import numpy as np
import pytest

from geogate.evolution import (
    StaticError,
    UnsupportedFamilyError,
    analytic_fidelity,
    bloch_vector,
    cyclic_phase_check,
    dressed_states,
    dynamical_phases,
    fidelity_scan,
    loop_closure_infidelity,
    parallel_transport_profile,
    parallel_transport_residual,
    propagate,
    propagate_sampled,
    two_pi_printed_expansion,
)
from geogate.pulses import (
    GateParams,
    conventional_sequence,
    dynamical_rotation,
    gate_sequence,
    optimized_sequence,
    rotation_to_gate_params,
    target_unitary,
)
from geogate.su2 import IDENTITY, su2_exp, trace_fidelity

from conftest import random_axis

X_AXIS = np.array([1.0, 0.0, 0.0])


def x_params(chi):
    return rotation_to_gate_params(X_AXIS, chi)


class TestPropagate:
    def test_zero_error_reaches_target(self, rng):
        for _ in range(20):
            params = GateParams(
                rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi), rng.uniform(-np.pi, np.pi)
            )
            seq = conventional_sequence(params)
            assert trace_fidelity(target_unitary(params), propagate(seq)) >= 1 - 1e-12

    def test_unitary_under_any_static_error(self, rng):
        for _ in range(50):
            params = GateParams(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi), 0.5)
            err = StaticError(epsilon=rng.uniform(-0.5, 0.5), delta=rng.uniform(-0.5, 0.5))
            u = propagate(optimized_sequence(params), err)
            assert np.allclose(u.conj().T @ u, IDENTITY, atol=1e-12)

    def test_conventional_off_resonance_expansion(self):
        """Second-order reference: F = 1 - 2 cos^4(chi/4) delta^2 at chi=pi/2."""
        seq = conventional_sequence(x_params(np.pi / 2))
        fid = trace_fidelity(su2_exp(X_AXIS, np.pi / 2), propagate(seq, StaticError(delta=0.02)))
        expected = 1 - 2 * np.cos(np.pi / 8) ** 4 * 0.02**2
        assert fid == pytest.approx(expected, abs=3e-7)  # O(delta^4) remainder

    def test_optimized_off_resonance_expansion(self):
        seq = optimized_sequence(x_params(np.pi / 2))
        fid = trace_fidelity(su2_exp(X_AXIS, np.pi / 2), propagate(seq, StaticError(delta=0.02)))
        expected = 1 - 2 * np.sin(np.pi / 8) ** 4 * 0.02**2
        assert fid == pytest.approx(expected, abs=5e-7)

    def test_naive_off_resonance_expansion(self):
        seq = dynamical_rotation(0.0, np.pi / 2)
        fid = trace_fidelity(su2_exp(X_AXIS, np.pi / 2), propagate(seq, StaticError(delta=0.02)))
        assert fid == pytest.approx(0.9999, abs=1e-7)

    def test_delta_suppressed_segment_ignores_delta(self):
        seq = optimized_sequence(x_params(np.pi / 2), perfect_pi=True)
        f_perfect = trace_fidelity(
            su2_exp(X_AXIS, np.pi / 2), propagate(seq, StaticError(delta=0.1))
        )
        f_plain = trace_fidelity(
            su2_exp(X_AXIS, np.pi / 2),
            propagate(optimized_sequence(x_params(np.pi / 2)), StaticError(delta=0.1)),
        )
        assert f_perfect != pytest.approx(f_plain, abs=1e-6)

    def test_error_bounds_validated(self):
        with pytest.raises(ValueError):
            StaticError(delta=1.5)


class TestDressedStates:
    def test_poles(self):
        plus, minus = dressed_states(0.0, 0.0)
        assert np.allclose(plus, [1, 0])
        assert np.allclose(minus, [0, -1])

    def test_equator(self):
        plus, minus = dressed_states(np.pi / 2, 0.0)
        assert np.allclose(plus, np.array([1, 1]) / np.sqrt(2))
        assert np.allclose(minus, np.array([1, -1]) / np.sqrt(2))

    def test_orthonormal_property(self, rng):
        for _ in range(100):
            plus, minus = dressed_states(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            assert abs(np.vdot(plus, minus)) <= 1e-12
            assert abs(np.vdot(plus, plus) - 1) <= 1e-12
            assert abs(np.vdot(minus, minus) - 1) <= 1e-12


class TestTrajectory:
    def test_conventional_loop_closes_at_zero_noise(self):
        seq = conventional_sequence(x_params(np.pi / 2))
        traj = propagate_sampled(seq)
        assert traj.closure_distance <= 1e-9
        assert np.allclose(np.linalg.norm(traj.bloch_points, axis=1), 1.0, atol=1e-9)

    def test_conventional_loop_opens_under_delta(self):
        seq = conventional_sequence(x_params(np.pi / 2))
        traj = propagate_sampled(seq, StaticError(delta=0.2))
        assert traj.closure_distance > 0.05

    def test_optimized_loop_nearly_closes_under_delta(self):
        conv = propagate_sampled(
            conventional_sequence(x_params(np.pi / 2)), StaticError(delta=0.2)
        )
        opt = propagate_sampled(optimized_sequence(x_params(np.pi / 2)), StaticError(delta=0.2))
        assert opt.closure_distance < conv.closure_distance

    def test_bloch_vector(self):
        assert np.allclose(bloch_vector(np.array([1.0, 0.0])), [0, 0, 1])
        assert np.allclose(bloch_vector(np.array([1.0, 1.0]) / np.sqrt(2)), [1, 0, 0])

    def test_sampling_validation(self):
        with pytest.raises(ValueError):
            propagate_sampled(conventional_sequence(x_params(1.0)), samples_per_segment=1)


class TestCyclicPhases:
    def test_conventional_phases_are_plus_minus_gamma(self, rng):
        for _ in range(20):
            gamma = rng.uniform(-np.pi + 0.1, np.pi - 0.1)
            params = GateParams(rng.uniform(0.1, np.pi - 0.1), rng.uniform(0, 2 * np.pi), gamma)
            cp = cyclic_phase_check(conventional_sequence(params))
            assert cp.loop_parity == 1
            assert abs(np.exp(1j * cp.phase_plus) - np.exp(1j * gamma)) <= 1e-9
            assert abs(np.exp(1j * cp.phase_minus) - np.exp(-1j * gamma)) <= 1e-9
            assert cp.closure_defect <= 1e-12

    def test_optimized_phases_carry_spinor_parity(self, rng):
        """The 3*pi loop returns +-gamma + pi: parity -1, closure exact."""
        for _ in range(20):
            gamma = rng.uniform(-np.pi + 0.1, np.pi - 0.1)
            params = GateParams(rng.uniform(0.1, np.pi - 0.1), rng.uniform(0, 2 * np.pi), gamma)
            cp = cyclic_phase_check(optimized_sequence(params))
            assert cp.loop_parity == -1
            assert abs(np.exp(1j * cp.phase_plus) + np.exp(1j * gamma)) <= 1e-9
            assert abs(np.exp(1j * cp.phase_minus) + np.exp(-1j * gamma)) <= 1e-9
            assert cp.closure_defect <= 1e-12

    def test_gamma_zero(self):
        cp = cyclic_phase_check(conventional_sequence(GateParams(0.7, 0.2, 0.0)))
        assert cp.phase_plus == pytest.approx(0.0, abs=1e-12)
        assert cp.phase_minus == pytest.approx(0.0, abs=1e-12)

    def test_non_geometric_family_rejected(self):
        with pytest.raises(UnsupportedFamilyError):
            cyclic_phase_check(dynamical_rotation(0.0, np.pi / 2))


class TestParallelTransport:
    def test_conventional_transports(self, rng):
        for _ in range(10):
            params = GateParams(
                rng.uniform(0.1, np.pi - 0.1), rng.uniform(0, 2 * np.pi), rng.uniform(-3, 3)
            )
            assert parallel_transport_residual(conventional_sequence(params)) <= 1e-9

    def test_dynamical_gate_accrues_dynamical_phase(self):
        assert parallel_transport_residual(dynamical_rotation(0.0, np.pi / 2)) > 0.1

    def test_optimized_corrector_structure(self, rng):
        """Outer segments transport; the corrector pi-pulse drives the dressed
        state along its own axis (residual exactly 1/2) and contributes an
        exact -+pi/2 dynamical phase."""
        for _ in range(5):
            params = GateParams(
                rng.uniform(0.1, np.pi - 0.1), rng.uniform(0, 2 * np.pi), rng.uniform(-3, 3)
            )
            seq = optimized_sequence(params)
            profile = parallel_transport_profile(seq)
            assert len(profile) == 5
            assert np.max(np.delete(profile, 2)) <= 1e-9
            assert profile[2] == pytest.approx(0.5, abs=1e-9)
        phases = dynamical_phases(optimized_sequence(GateParams(np.pi / 2, 0.0, -np.pi / 4)))
        assert phases[0] == pytest.approx(np.pi / 2, abs=1e-6)
        assert phases[1] == pytest.approx(-np.pi / 2, abs=1e-6)


class TestLoopClosure:
    def test_zero_delta_closes(self):
        assert loop_closure_infidelity(conventional_sequence(x_params(np.pi / 2)), 0.0) <= 1e-12

    def test_optimized_below_conventional_pointwise(self):
        params = x_params(np.pi / 2)
        for delta in np.linspace(0.01, 0.3, 12):
            conv = loop_closure_infidelity(conventional_sequence(params), delta)
            opt = loop_closure_infidelity(optimized_sequence(params), delta)
            assert opt < conv

    def test_perfect_pi_better_for_large_chi_small_delta(self):
        """At chi = 5*pi/6 the idealized corrector closes the loop better
        over the small-delta range."""
        params = x_params(5 * np.pi / 6)
        wins = 0
        for delta in np.linspace(0.01, 0.08, 8):
            plain = loop_closure_infidelity(optimized_sequence(params), delta)
            perfect = loop_closure_infidelity(optimized_sequence(params, perfect_pi=True), delta)
            wins += perfect < plain
        assert wins == 8


class TestAnalyticFidelity:
    def test_naive_delta_value(self):
        assert analytic_fidelity("naive", "offresonance", np.pi, 0.1) == pytest.approx(0.995)

    def test_optimized_delta_value(self):
        expected = 1 - 2 * np.sin(np.pi / 8) ** 4 * 0.01
        assert analytic_fidelity("opt", "offresonance", np.pi / 2, 0.1) == pytest.approx(expected)

    def test_zero_magnitude(self):
        for family in ("naive", "geo", "opt", "twopi"):
            assert analytic_fidelity(family, "offresonance", 1.0, 0.0) == pytest.approx(1.0)

    def test_unsupported_pair(self):
        with pytest.raises(UnsupportedFamilyError):
            analytic_fidelity("opt", "amplitude", 1.0, 0.01)
        with pytest.raises(UnsupportedFamilyError):
            analytic_fidelity("twopi", "amplitude", 1.0, 0.01)

    def test_two_pi_numeric_coefficient_matches_propagator(self):
        for chi in (np.pi / 6, np.pi / 2, 3 * np.pi / 4):
            delta = 1e-3
            seq = gate_sequence("twopi", X_AXIS, chi)
            numeric = trace_fidelity(su2_exp(X_AXIS, chi), propagate(seq, StaticError(delta=delta)))
            assert analytic_fidelity("twopi", "offresonance", chi, delta) == pytest.approx(
                numeric, abs=1e-8
            )

    def test_two_pi_printed_form_disagrees_with_propagator(self):
        """The published closed form for this family does not reproduce the
        exact propagator (documented discrepancy); the numeric oracle is
        authoritative."""
        chi, delta = np.pi / 2, 1e-2
        numeric = analytic_fidelity("twopi", "offresonance", chi, delta)
        printed = two_pi_printed_expansion(chi, delta)
        assert abs(numeric - printed) > 1e-4

    def test_delta_orderings_on_expansion(self):
        """Published robustness ordering of the second-order coefficients:
        F_naive >= F_geo and F_opt >= both under off-resonance error;
        geometric beats naive under amplitude error."""
        for chi in np.linspace(-np.pi, np.pi, 41):
            d_naive = analytic_fidelity("naive", "offresonance", chi, 0.01)
            d_geo = analytic_fidelity("geo", "offresonance", chi, 0.01)
            d_opt = analytic_fidelity("opt", "offresonance", chi, 0.01)
            assert d_naive >= d_geo - 1e-12
            assert d_opt >= d_naive - 1e-12
            assert d_opt >= d_geo - 1e-12
            e_naive = analytic_fidelity("naive", "amplitude", chi, 0.01)
            e_geo = analytic_fidelity("geo", "amplitude", chi, 0.01)
            assert e_naive <= e_geo + 1e-12

    def test_optimized_ordering_numeric_at_finite_delta(self):
        for chi in (np.pi / 6, np.pi / 2, 3 * np.pi / 4):
            target = su2_exp(X_AXIS, chi)
            err = StaticError(delta=0.02)
            f_naive = trace_fidelity(target, propagate(gate_sequence("naive", X_AXIS, chi), err))
            f_geo = trace_fidelity(target, propagate(gate_sequence("geo", X_AXIS, chi), err))
            f_opt = trace_fidelity(target, propagate(gate_sequence("opt", X_AXIS, chi), err))
            assert f_opt >= f_naive >= f_geo


class TestFidelityScan:
    def test_zero_point_is_one(self):
        fids = fidelity_scan("geo", X_AXIS, np.pi / 2, np.array([0.0]))
        assert fids[0] == pytest.approx(1.0, abs=1e-12)

    def test_even_in_delta_for_x_rotations(self):
        """Symmetry under delta -> -delta with sigma_x conjugation: the
        conjugated schedule coincides with a realization of the same gate
        for the three compared families (not for the two-pi schedule)."""
        grid = np.linspace(-0.2, 0.2, 21)
        for family, perfect in (("naive", False), ("geo", False), ("opt", False), ("opt", True)):
            fids = fidelity_scan(family, X_AXIS, np.pi / 2, grid, perfect_pi=perfect)
            assert np.max(np.abs(fids - fids[::-1])) <= 1e-9

    def test_two_pi_curve_is_not_even(self):
        # the two-pi schedule maps onto a different sequence under the
        # conjugation, so its curve is genuinely asymmetric in delta
        grid = np.linspace(-0.2, 0.2, 21)
        fids = fidelity_scan("twopi", X_AXIS, np.pi / 2, grid)
        assert np.max(np.abs(fids - fids[::-1])) > 1e-3

    def test_taylor_remainder_bounded(self):
        """|F_num - F_analytic| / delta^3 stays bounded as delta shrinks."""
        for family in ("naive", "geo", "opt"):
            ratios = []
            for delta in (1e-1, 1e-2, 1e-3):
                fid = fidelity_scan(family, X_AXIS, np.pi / 2, np.array([delta]))[0]
                defect = abs(fid - analytic_fidelity(family, "offresonance", np.pi / 2, delta))
                ratios.append(defect / delta**3)
            assert max(ratios) == ratios[0]  # non-increasing: remainder is O(d^4)
            assert ratios[0] < 1.0
