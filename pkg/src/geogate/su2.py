"""Exact 2x2 complex linear algebra for a driven two-level system.

Everything downstream (pulse propagation, benchmarking, filter functions)
reduces to products of SU(2) exponentials, so this module provides the
closed forms once: Pauli matrices, ``exp(-i(angle/2) n.sigma)``, the
phase-invariant trace fidelity ``|Tr(U^dag V)| / 2``, and the axis-angle
decomposition of an arbitrary 2x2 unitary.

Conventions
-----------
* hbar = 1 throughout.
* ``su2_exp(axis, angle)`` is the rotation by ``angle`` about ``axis``
  (spinor half-angle convention), i.e. ``cos(angle/2) I - i sin(angle/2)
  (axis . sigma)``.
* ``axis_angle`` writes ``U = exp(i g) exp(-i(angle/2) n.sigma)`` with
  ``angle in [0, 2*pi]`` and ``g = arg(det U)/2 in (-pi/2, pi/2]``; the
  representation ``(n, angle)`` is equivalent to ``(-n, -angle)`` and the
  canonical branch picks ``angle >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = np.array([PAULI_X, PAULI_Y, PAULI_Z])

for _m in (IDENTITY, PAULI_X, PAULI_Y, PAULI_Z, PAULIS):
    _m.setflags(write=False)


def is_unitary(matrix: np.ndarray, atol: float = 1e-10) -> bool:
    matrix = np.asarray(matrix)
    if matrix.shape != (2, 2) or not np.all(np.isfinite(matrix)):
        return False
    return bool(np.allclose(matrix.conj().T @ matrix, IDENTITY, atol=atol, rtol=0.0))


def su2_exp(axis: np.ndarray, angle: float) -> np.ndarray:
    """Closed-form ``exp(-i (angle/2) (axis . sigma))`` with `axis` normalized.

    A zero axis is accepted only for ``angle == 0`` (identity).
    """
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,) or not np.all(np.isfinite(axis)) or not np.isfinite(angle):
        raise ValueError("axis must be a finite 3-vector and angle finite")
    norm = float(np.linalg.norm(axis))
    if norm == 0.0:
        if angle == 0.0:
            return IDENTITY.copy()
        raise ValueError("zero axis with nonzero rotation angle")
    nx, ny, nz = axis / norm
    half = 0.5 * angle
    c = np.cos(half)
    s = np.sin(half)
    return np.array(
        [
            [c - 1j * s * nz, -1j * s * (nx - 1j * ny)],
            [-1j * s * (nx + 1j * ny), c + 1j * s * nz],
        ]
    )


def trace_fidelity(target: np.ndarray, actual: np.ndarray, atol: float = 1e-8) -> float:
    """Phase-invariant gate fidelity ``|Tr(target^dag actual)| / 2``.

    Both arguments must be unitary to within `atol`.
    """
    for name, matrix in (("target", target), ("actual", actual)):
        if not is_unitary(matrix, atol=atol):
            raise ValueError(f"{name} is not unitary to within {atol}")
    return float(abs(np.trace(np.asarray(target).conj().T @ np.asarray(actual))) / 2.0)


@dataclass(frozen=True)
class AxisAngle:
    """Rotation axis (unit 3-vector), angle in radians, and global phase."""

    axis: tuple[float, float, float]
    angle: float
    global_phase: float

    def unitary(self) -> np.ndarray:
        return np.exp(1j * self.global_phase) * su2_exp(np.array(self.axis), self.angle)


def axis_angle_decompose(unitary: np.ndarray, atol: float = 1e-10) -> AxisAngle:
    """Invert :func:`su2_exp` up to the documented branch conventions.

    Near ``angle = 0`` or ``angle = 2*pi`` the axis is ill-defined; ``z`` is
    returned by convention (any axis reproduces the unitary there).
    """
    unitary = np.asarray(unitary, dtype=complex)
    if not is_unitary(unitary, atol=atol):
        raise ValueError(f"input is not unitary to within {atol}")
    phase = 0.5 * np.angle(np.linalg.det(unitary))
    special = unitary * np.exp(-1j * phase)
    cos_half = float(np.real(special[0, 0] + special[1, 1])) / 2.0
    sin_axis = np.array(
        [
            -np.imag(special[0, 1] + special[1, 0]) / 2.0,
            (np.real(special[1, 0]) - np.real(special[0, 1])) / 2.0,
            -np.imag(special[0, 0] - special[1, 1]) / 2.0,
        ]
    )
    sin_half = float(np.linalg.norm(sin_axis))
    angle = 2.0 * np.arctan2(sin_half, cos_half)
    if sin_half < 1e-14:
        axis = (0.0, 0.0, 1.0)
        angle = 0.0 if cos_half > 0.0 else 2.0 * np.pi
    else:
        axis = tuple(sin_axis / sin_half)
    return AxisAngle(axis=axis, angle=float(angle), global_phase=float(phase))


def canonical_rotation(axis: np.ndarray, angle: float) -> tuple[np.ndarray, float]:
    """Fold an arbitrary rotation onto ``angle in [0, pi]`` by axis flips.

    ``R(n, angle)`` and ``R(-n, 2*pi - angle)`` implement the same gate up
    to global phase; the minimal-angle representative is the one whose
    second-order noise susceptibility the pulse constructions are designed
    around.
    """
    axis = np.asarray(axis, dtype=float)
    angle = float(angle) % (4.0 * np.pi)
    if angle > 2.0 * np.pi:
        angle -= 4.0 * np.pi  # spinor period: same gate, opposite sign
    if angle < 0.0:
        axis, angle = -axis, -angle
    if angle > np.pi:
        axis, angle = -axis, 2.0 * np.pi - angle
    return axis, angle
