"""Open-system evolution: relaxation and pure dephasing during a pulse.

Master equation (hbar = 1, rates in units of the Rabi rate):

    drho/dt = -i [H'(t), rho] + gamma_1 D[sigma_-] rho
              + (gamma_phi / 2) D[sigma_z] rho,
    D[L] rho = (2 L rho L^dag - L^dag L rho - rho L^dag L) / 2,

with ``sigma_- = |0><1|`` (decay into the computational ground state) and
``H'`` the statically perturbed drive from :mod:`geogate.evolution`.
Integration is a fixed-step classical Runge-Kutta (RK4) in natural time
units (1/Omega) for bit-level determinism; accuracy is controlled by the
step and validated by a step-halving test.

The tracked fidelity is ``F(t) = <psi_ideal(t)| rho(t) |psi_ideal(t)>``
where ``|psi_ideal(t)>`` is the zero-noise, zero-decoherence evolution of
``|0>``; at the final time this is the state fidelity of the noisy gate on
the ground state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evolution import NO_ERROR, StaticError
from .pulses import PulseSequence
from .su2 import PAULI_X, PAULI_Y, PAULI_Z, su2_exp

SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |0><1|


class AccuracyError(RuntimeError):
    """Integration step too coarse: positivity or trace drifted."""


@dataclass(frozen=True)
class LindbladParams:
    """Relaxation and pure-dephasing rates in units of the Rabi rate."""

    gamma1: float = 0.0
    gamma_phi: float = 0.0

    def __post_init__(self):
        if self.gamma1 < 0.0 or self.gamma_phi < 0.0:
            raise ValueError("rates must be >= 0")


def validate_density_matrix(rho: np.ndarray, atol: float = 1e-8) -> None:
    rho = np.asarray(rho)
    if abs(np.trace(rho).real - 1.0) > atol or abs(np.trace(rho).imag) > atol:
        raise ValueError("density matrix trace differs from 1")
    if not np.allclose(rho, rho.conj().T, atol=1e-10):
        raise ValueError("density matrix is not Hermitian")
    if np.linalg.eigvalsh(rho).min() < -atol:
        raise ValueError("density matrix has a negative eigenvalue")


def lindblad_rhs(rho: np.ndarray, hamiltonian: np.ndarray, params: LindbladParams) -> np.ndarray:
    """Right-hand side of the master equation; traceless by construction."""
    out = -1j * (hamiltonian @ rho - rho @ hamiltonian)
    for op, rate in ((SIGMA_MINUS, params.gamma1), (PAULI_Z, 0.5 * params.gamma_phi)):
        if rate > 0.0:
            op_dag = op.conj().T
            anticomm = op_dag @ op @ rho + rho @ op_dag @ op
            out += rate * (op @ rho @ op_dag - 0.5 * anticomm)
    return out


@dataclass(frozen=True)
class MasterTrajectory:
    """Times (units of 1/Omega), density matrices, and ideal-state fidelities
    sampled along the integration."""

    times: np.ndarray
    states: np.ndarray
    fidelities: np.ndarray

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def final_fidelity(self) -> float:
        return float(self.fidelities[-1])


def _segment_hamiltonian(segment, err: StaticError) -> np.ndarray:
    """Constant perturbed Hamiltonian of one segment, Omega = 1."""
    cos_p, sin_p = math.cos(segment.phase), math.sin(segment.phase)
    drive = 0.5 * (cos_p * PAULI_X + sin_p * PAULI_Y)
    delta = 0.0 if segment.delta_suppressed else err.delta
    return (1.0 + err.epsilon) * drive + 0.5 * delta * PAULI_Z


def evolve_master(
    seq: PulseSequence,
    err: StaticError = NO_ERROR,
    params: LindbladParams = LindbladParams(),
    dt: float = math.pi / 400.0,
    record_every: int = 1,
    positivity_tol: float = 1e-6,
) -> MasterTrajectory:
    """Fixed-step RK4 integration of the master equation over a sequence.

    `dt` is in units of 1/Omega and must resolve the drive: at least 100
    steps per pi of pulse area.  Trace and positivity are monitored; a
    violation beyond `positivity_tol` raises :class:`AccuracyError`.
    """
    if dt > math.pi / 100.0:
        raise ValueError(f"dt={dt} too coarse: need >= 100 steps per pi of area")
    rho = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    psi = np.array([1.0, 0.0], dtype=complex)
    times = [0.0]
    states = [rho.copy()]
    fidelities = [1.0]
    now = 0.0
    for segment in seq.segments:
        if segment.area == 0.0:
            continue
        hamiltonian = _segment_hamiltonian(segment, err)
        axis = np.array([math.cos(segment.phase), math.sin(segment.phase), 0.0])
        steps = max(2, int(math.ceil(segment.area / dt)))
        step = segment.area / steps  # natural units: duration = area (Omega = 1)
        for j in range(1, steps + 1):
            k1 = lindblad_rhs(rho, hamiltonian, params)
            k2 = lindblad_rhs(rho + 0.5 * step * k1, hamiltonian, params)
            k3 = lindblad_rhs(rho + 0.5 * step * k2, hamiltonian, params)
            k4 = lindblad_rhs(rho + step * k3, hamiltonian, params)
            rho = rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            now += step
            if j % record_every == 0 or j == steps:
                trace = np.trace(rho)
                if abs(trace.real - 1.0) > positivity_tol or _min_eigenvalue(rho) < -positivity_tol:
                    raise AccuracyError(
                        f"trace/positivity violated beyond {positivity_tol} at t={now}"
                    )
                ideal = su2_exp(axis, j * step) @ psi
                times.append(now)
                states.append(rho.copy())
                fidelities.append(float(np.real(np.vdot(ideal, rho @ ideal))))
        psi = su2_exp(axis, segment.area) @ psi
    return MasterTrajectory(
        times=np.array(times), states=np.array(states), fidelities=np.array(fidelities)
    )


def _min_eigenvalue(rho: np.ndarray) -> float:
    # closed form for a Hermitian 2x2: mean +- radius
    a = rho[0, 0].real
    d = rho[1, 1].real
    b = rho[0, 1]
    radius = math.sqrt(((a - d) / 2.0) ** 2 + abs(b) ** 2)
    return (a + d) / 2.0 - radius


def relaxation_added_infidelity(
    seq: PulseSequence,
    err: StaticError,
    gamma1: float,
    dt: float = math.pi / 400.0,
) -> float:
    """Final-time fidelity loss attributable to relaxation alone:
    ``F(gamma1 = 0) - F(gamma1)`` at fixed static error."""
    base = evolve_master(seq, err, LindbladParams(), dt=dt)
    relaxed = evolve_master(seq, err, LindbladParams(gamma1=gamma1), dt=dt)
    return base.final_fidelity - relaxed.final_fidelity


__all__ = [
    "LindbladParams",
    "MasterTrajectory",
    "AccuracyError",
    "SIGMA_MINUS",
    "lindblad_rhs",
    "validate_density_matrix",
    "evolve_master",
    "relaxation_added_infidelity",
]
