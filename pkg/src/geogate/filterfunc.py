"""First-order filter functions and 1/f dephasing fidelities.

For a sequence with error-free propagator ``U_c(t)`` the control matrix is

    R_jk(t) = Tr[U_c^dag(t) sigma_j U_c(t) sigma_k] / 2,

an SO(3) rotation at every instant.  Its windowed Fourier transform

    R_jk(omega) = -i omega  int_0^T' exp(i omega t) R_jk(t) dt

defines the dephasing filter function ``F_z(omega) = sum_k |R_zk(omega)|^2``
(the off-resonance error couples through sigma_z).  The quantity plotted
and integrated everywhere is ``F_z/omega^2 = sum_k |int exp(i omega t)
R_zk(t) dt|^2``, whose zero-frequency limit equals ``8 K / Omega^2`` with
``K`` the gate's quasi-static second-order infidelity coefficient -- a
useful consistency anchor between this module and the static expansions.

Units. Internally everything is dimensionless: time in units of ``1/Omega``
(i.e. accumulated pulse area) and frequency as ``nu = omega/Omega =
f/f_Rabi``.  Physical conversions happen only at the spectrum-integration
boundary.

Spectrum coupling.  The noise is the qubit-frequency fluctuation
``dnu(t)`` [Hz] with one-sided spectral density ``S(f) = S0/f^alpha``
[Hz^2/Hz]; it enters the Hamiltonian as ``beta(t) sigma_z / 2`` with
``beta = 2 pi dnu`` [rad/s].  The first-order (Magnus) average infidelity
is then

    1 - F = (1/8) int_{f_lo}^{f_uv} S_beta(f) * [F_z/omega^2](2 pi f) df,
    S_beta = (2 pi)^2 S.

This "ordinary" convention is the default.  The "angular" convention
instead reads the printed reduced form literally -- frequencies treated as
angular, kernel ``exp(i f t)``, prefactor ``1/(2 pi)`` -- and is exposed
because the source material is ambiguous about its frequency variable.
The infrared cutoff ``f_lo`` is required: ``S`` diverges at ``f -> 0`` for
``alpha >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pulses import GateFamily, PulseSequence, gate_sequence, named_rotation
from .su2 import IDENTITY, PAULIS, su2_exp

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}

CONVENTIONS = ("ordinary", "angular")


@dataclass(frozen=True)
class NoiseSpectrum:
    """1/f noise spectral density ``S(f) = S0 / f^alpha`` with integration
    cutoffs, in ordinary-frequency units (Hz)."""

    S0: float = 2.67e6
    alpha: float = 1.01
    f_lo: float = 10.0
    f_uv: float = 320e3

    def __post_init__(self):
        if self.S0 < 0.0:
            raise ValueError("S0 must be >= 0")
        if not (0.0 < self.f_lo < self.f_uv):
            raise ValueError("need 0 < f_lo < f_uv")

    def density(self, f: np.ndarray) -> np.ndarray:
        return self.S0 / np.asarray(f, dtype=float) ** self.alpha


@dataclass(frozen=True)
class ControlTrajectory:
    """Sampled control matrix: times in seconds over [0, T'], one 3x3
    orthogonal matrix per sample."""

    times: np.ndarray
    matrices: np.ndarray

    @property
    def duration(self) -> float:
        return float(self.times[-1])


@dataclass(frozen=True)
class FilterCurve:
    """``F_z(f)/f^2`` against ``f/f_Rabi``; values are dimensionless
    (natural units, Omega = 1); divide by Omega^2 [rad/s]^2 for seconds^2."""

    freqs: np.ndarray
    values: np.ndarray


def control_matrix(seq: PulseSequence, rabi: float = 1.0, samples: int = 2048) -> ControlTrajectory:
    """Sample ``R(t)`` on a grid with all segment boundaries included.

    `samples` is the total node budget, distributed over segments in
    proportion to area; it must resolve the drive (area step <= 0.1 rad).
    """
    total_area = seq.total_area
    if total_area <= 0.0:
        raise ValueError("sequence has zero total area")
    if samples < total_area / 0.1:
        raise ValueError(
            f"samples={samples} too coarse: need >= {math.ceil(total_area / 0.1)} "
            "for an area step <= 0.1 rad"
        )
    taus = [0.0]
    unitaries = [IDENTITY.copy()]
    u_start = IDENTITY.copy()
    tau_start = 0.0
    for segment in seq.segments:
        if segment.area == 0.0:
            continue
        count = max(2, int(round(samples * segment.area / total_area)))
        axis = np.array([math.cos(segment.phase), math.sin(segment.phase), 0.0])
        for j in range(1, count + 1):
            area = segment.area * j / count
            taus.append(tau_start + area)
            unitaries.append(su2_exp(axis, area) @ u_start)
        u_start = unitaries[-1]
        tau_start += segment.area
    unitaries = np.array(unitaries)
    dagger = unitaries.conj().transpose(0, 2, 1)
    matrices = np.einsum("tab,jbc,tcd,kda->tjk", dagger, PAULIS, unitaries, PAULIS).real / 2.0
    return ControlTrajectory(times=np.array(taus) / rabi, matrices=matrices)


def fourier_control(traj: ControlTrajectory, omegas: np.ndarray) -> np.ndarray:
    """``R_jk(omega) = -i omega  int exp(i omega t) R_jk(t) dt`` by composite
    trapezoid on the sampled grid; shape (len(omegas), 3, 3)."""
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    kernels = np.exp(1j * omegas[:, None] * traj.times[None, :])
    integrand = kernels[:, :, None, None] * traj.matrices[None, :, :, :]
    integrals = np.trapezoid(integrand, traj.times, axis=1)
    return -1j * omegas[:, None, None] * integrals


def _windowed_transform_row(traj: ControlTrajectory, omegas: np.ndarray, row: int) -> np.ndarray:
    """``int exp(i omega t) R_rowk(t) dt`` (no -i*omega prefactor)."""
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    kernels = np.exp(1j * omegas[:, None] * traj.times[None, :])
    integrand = kernels[:, :, None] * traj.matrices[None, :, row, :]
    return np.trapezoid(integrand, traj.times, axis=1)


def filter_weight(traj: ControlTrajectory, omegas: np.ndarray, noise_axis: str = "z") -> np.ndarray:
    """``F_a(omega)/omega^2 = sum_k |int exp(i omega t) R_ak dt|^2`` for the
    noise axis `a`; finite and smooth through omega = 0."""
    row = _AXIS_INDEX[noise_axis]
    transform = _windowed_transform_row(traj, omegas, row)
    return np.sum(np.abs(transform) ** 2, axis=-1)


def filter_function(
    seq: PulseSequence, rabi: float = 1.0, freqs: np.ndarray | None = None, samples: int = 2048
) -> FilterCurve:
    """Dephasing filter curve ``F_z(f)/f^2`` on a dimensionless
    ``f/f_Rabi`` grid (default: log-spaced 1e-4..2)."""
    if freqs is None:
        freqs = np.logspace(-4, math.log10(2.0), 160)
    freqs = np.asarray(freqs, dtype=float)
    traj = control_matrix(seq, rabi=1.0, samples=samples)  # natural units
    # f/f_Rabi equals omega/Omega, the natural-units angular argument
    values = filter_weight(traj, freqs)
    return FilterCurve(freqs=freqs, values=values)


def _infidelity_on_grid(
    traj: ControlTrajectory, spectrum: NoiseSpectrum, rabi: float, points: int, convention: str
) -> float:
    fs = np.logspace(math.log10(spectrum.f_lo), math.log10(spectrum.f_uv), points)
    if convention == "ordinary":
        weight = filter_weight(traj, 2.0 * np.pi * fs / rabi)  # natural-units G
        s_beta = (2.0 * np.pi) ** 2 * spectrum.density(fs)
        integrand = s_beta * weight / rabi**2 / 8.0
    elif convention == "angular":
        weight = filter_weight(traj, fs / rabi)
        integrand = spectrum.density(fs) * weight / rabi**2 / (2.0 * np.pi)
    else:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    # trapezoid in log-space: int g df = int g f dlnf
    return float(np.trapezoid(integrand * fs, np.log(fs)))


def _converged_infidelity(
    traj: ControlTrajectory,
    spectrum: NoiseSpectrum,
    rabi: float,
    convention: str,
    rel_tol: float,
    max_points: int,
) -> float:
    points = 256
    previous = _infidelity_on_grid(traj, spectrum, rabi, points, convention)
    while points < max_points:
        points *= 2
        current = _infidelity_on_grid(traj, spectrum, rabi, points, convention)
        if abs(current - previous) <= rel_tol * max(abs(current), 1e-300):
            return current
        previous = current
    return previous


def ff_fidelity(
    seq: PulseSequence,
    rabi: float,
    spectrum: NoiseSpectrum,
    convention: str = "ordinary",
    samples: int = 1024,
    rel_tol: float = 1e-4,
    max_points: int = 4096,
) -> float:
    """First-order fidelity under the 1/f off-resonance spectrum.

    `rabi` is Omega in rad/s.  The frequency quadrature is refined by grid
    doubling until the result is stable to `rel_tol` (relative).
    """
    if spectrum.S0 == 0.0:
        return 1.0
    traj = control_matrix(seq, rabi=1.0, samples=samples)  # natural-units grid
    return 1.0 - _converged_infidelity(traj, spectrum, rabi, convention, rel_tol, max_points)


TABLE_GATES = ("X/2", "X/4", "Y/2", "Y/4", "Z/2", "Z/4")
TABLE_FAMILIES = (
    GateFamily.NAIVE_DYNAMICAL,
    GateFamily.CONVENTIONAL_GEOMETRIC,
    GateFamily.OPTIMIZED_GEOMETRIC,
)


def gate_table_sequences(perfect_pi: bool = False) -> dict[tuple[str, str], PulseSequence]:
    """The six benchmark rotations compiled in the three compared families."""
    out = {}
    for gate_name in TABLE_GATES:
        axis, chi = named_rotation(gate_name)
        for family in TABLE_FAMILIES:
            out[(family.value, gate_name)] = gate_sequence(
                family, axis, chi, perfect_pi=perfect_pi
            )
    return out


def _table_trajectories(samples: int = 1024) -> dict[tuple[str, str], ControlTrajectory]:
    return {
        key: control_matrix(seq, rabi=1.0, samples=samples)
        for key, seq in gate_table_sequences().items()
    }


def fidelity_table(
    rabi: float,
    spectrum: NoiseSpectrum,
    convention: str = "ordinary",
    _trajectories: dict | None = None,
) -> dict[str, dict[str, float]]:
    """Integrated 1/f fidelities for the six rotations x three families."""
    trajectories = _trajectories if _trajectories is not None else _table_trajectories()
    table: dict[str, dict[str, float]] = {}
    for family in TABLE_FAMILIES:
        table[family.value] = {
            gate: 1.0
            - _converged_infidelity(
                trajectories[(family.value, gate)], spectrum, rabi, convention, 1e-4, 4096
            )
            for gate in TABLE_GATES
        }
    return table


def infrared_cutoff_sweep(
    rabi: float,
    spectrum: NoiseSpectrum,
    cutoffs: tuple[float, ...] = (10.0, 100.0, 1000.0),
    reference: dict[str, dict[str, float]] | None = None,
    convention: str = "ordinary",
) -> dict:
    """Recompute the fidelity table at several infrared cutoffs.

    When a `reference` table (fractional fidelities) is given, the per-cutoff
    maximum and mean absolute deviations against it are reported and the
    best cutoff is selected by mean deviation.
    """
    import dataclasses as _dc

    trajectories = _table_trajectories()
    results = {}
    for f_lo in cutoffs:
        spec = _dc.replace(spectrum, f_lo=float(f_lo))
        table = fidelity_table(rabi, spec, convention, _trajectories=trajectories)
        entry: dict = {"table": table}
        if reference is not None:
            deviations = [
                abs(table[fam][gate] - reference[fam][gate])
                for fam in table
                for gate in table[fam]
            ]
            entry["max_abs_dev"] = max(deviations)
            entry["mean_abs_dev"] = float(np.mean(deviations))
        results[float(f_lo)] = entry
    out = {"cutoffs": results, "convention": convention}
    if reference is not None:
        out["best_f_lo"] = min(results, key=lambda c: results[c]["mean_abs_dev"])
    return out


__all__ = [
    "NoiseSpectrum",
    "ControlTrajectory",
    "FilterCurve",
    "CONVENTIONS",
    "TABLE_GATES",
    "TABLE_FAMILIES",
    "control_matrix",
    "fourier_control",
    "filter_weight",
    "filter_function",
    "ff_fidelity",
    "gate_table_sequences",
    "fidelity_table",
    "infrared_cutoff_sweep",
]
