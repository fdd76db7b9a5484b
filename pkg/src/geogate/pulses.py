"""Pulse-sequence constructions for the four single-qubit gate families.

The drive is ``H(t) = Omega(t)/2 (cos(phi) sigma_x + sin(phi) sigma_y)``
with square segments: each :class:`PulseSegment` holds a constant phase
``phi`` and a pulse area ``integral Omega dt``.  A gate is specified by
:class:`GateParams` ``(theta, phi, gamma)``; its target unitary is
``exp(i gamma n.sigma)`` with ``n = (sin(theta)cos(phi), sin(theta)sin(phi),
cos(theta))``, equivalently a rotation by ``chi = -2 gamma`` about ``n``.

Families
--------
naive
    Plain resonant pulses; arbitrary axes via an x-y-x composite.
conventional geometric
    Three segments of total area ``2*pi`` tracing an orange-slice loop.
optimized geometric
    Five segments of total area ``3*pi``; the detour longitude carries a
    correcting pi-pulse at its midpoint.  Note the product of the five
    segment exponentials equals ``-exp(i gamma n.sigma)``: a 3*pi loop
    flips the spinor sign.  The gate is identical up to global phase.
two-pi corrected
    Seven segments of total area ``4*pi`` with two inserted pi-pulses;
    only ``theta <= pi/2`` is realizable (the last segment has area
    ``pi/2 - theta``).
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from .su2 import canonical_rotation, is_unitary, su2_exp, trace_fidelity

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


class GateFamily(enum.Enum):
    NAIVE_DYNAMICAL = "naive"
    CONVENTIONAL_GEOMETRIC = "geo"
    OPTIMIZED_GEOMETRIC = "opt"
    TWO_PI_CORRECTED = "twopi"

    @classmethod
    def coerce(cls, value: "GateFamily | str") -> "GateFamily":
        if isinstance(value, cls):
            return value
        for member in cls:
            if value in (member.value, member.name):
                return member
        raise ValueError(f"unknown gate family: {value!r}")


GEOMETRIC_FAMILIES = (GateFamily.CONVENTIONAL_GEOMETRIC, GateFamily.OPTIMIZED_GEOMETRIC)


@dataclass(frozen=True)
class GateParams:
    """Geometric-gate parameterization: polar/azimuthal rotation axis and
    half the (negated) rotation angle."""

    theta: float
    phi: float
    gamma: float

    def __post_init__(self):
        if not (-1e-12 <= self.theta <= np.pi + 1e-12):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")

    def axis(self) -> np.ndarray:
        return np.array(
            [
                math.sin(self.theta) * math.cos(self.phi),
                math.sin(self.theta) * math.sin(self.phi),
                math.cos(self.theta),
            ]
        )


@dataclass(frozen=True)
class PulseSegment:
    """One square drive segment: pulse area (rad), carrier phase (rad),
    Rabi rate (rad/s), and whether the off-resonance term is forced to
    zero inside it (idealized "perfect" correcting pulse)."""

    area: float
    phase: float
    rabi: float = 1.0
    delta_suppressed: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.area) and self.area >= 0.0):
            raise ValueError(f"segment area must be finite and >= 0, got {self.area}")
        if not (np.isfinite(self.rabi) and self.rabi > 0.0):
            raise ValueError(f"rabi must be finite and > 0, got {self.rabi}")

    @property
    def duration(self) -> float:
        return self.area / self.rabi


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple[PulseSegment, ...]
    family: GateFamily
    params: GateParams | None = None

    @property
    def total_area(self) -> float:
        return float(sum(seg.area for seg in self.segments))

    @property
    def duration(self) -> float:
        return float(sum(seg.duration for seg in self.segments))

    def to_dict(self) -> dict:
        out = {
            "family": self.family.value,
            "segments": [
                {
                    "area": seg.area,
                    "phase": seg.phase,
                    "rabi": seg.rabi,
                    "delta_suppressed": seg.delta_suppressed,
                }
                for seg in self.segments
            ],
        }
        if self.params is not None:
            out["params"] = {
                "theta": self.params.theta,
                "phi": self.params.phi,
                "gamma": self.params.gamma,
            }
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "PulseSequence":
        params = None
        if data.get("params") is not None:
            params = GateParams(**data["params"])
        segments = tuple(PulseSegment(**seg) for seg in data["segments"])
        return cls(segments=segments, family=GateFamily.coerce(data["family"]), params=params)

    @classmethod
    def from_json(cls, text: str) -> "PulseSequence":
        return cls.from_dict(json.loads(text))


def target_unitary(params: GateParams) -> np.ndarray:
    """``exp(i gamma n.sigma)``: the gate all geometric constructions aim at."""
    return su2_exp(params.axis(), -2.0 * params.gamma)


def rotation_to_gate_params(axis: np.ndarray, chi: float) -> GateParams:
    """Spherical angles of `axis` plus ``gamma = -chi/2`` so that
    ``target_unitary`` equals ``exp(-i (chi/2) axis.sigma)``.

    For axes along +-z the azimuth is undefined and fixed to 0.
    """
    axis = np.asarray(axis, dtype=float)
    norm = float(np.linalg.norm(axis))
    if not np.isclose(norm, 1.0, atol=1e-9):
        raise ValueError(f"axis must be a unit vector, |axis| = {norm}")
    axis = axis / norm
    theta = math.acos(float(np.clip(axis[2], -1.0, 1.0)))
    if abs(math.sin(theta)) < 1e-12:
        phi = 0.0
    else:
        phi = math.atan2(axis[1], axis[0]) % (2.0 * math.pi)
    return GateParams(theta=theta, phi=phi, gamma=-chi / 2.0)


def conventional_sequence(params: GateParams, rabi: float = 1.0) -> PulseSequence:
    """Orange-slice loop: areas ``(theta, pi, pi - theta)``, total ``2*pi``."""
    th, ph, gm = params.theta, params.phi, params.gamma
    segments = (
        PulseSegment(th, ph - np.pi / 2.0, rabi),
        PulseSegment(np.pi, ph + gm + np.pi / 2.0, rabi),
        PulseSegment(np.pi - th, ph - np.pi / 2.0, rabi),
    )
    return PulseSequence(segments, GateFamily.CONVENTIONAL_GEOMETRIC, params)


def optimized_sequence(params: GateParams, perfect_pi: bool = False, rabi: float = 1.0) -> PulseSequence:
    """Dynamically corrected loop: areas ``(theta, pi/2, pi, pi/2, pi - theta)``,
    total ``3*pi``; the middle pi-pulse is the corrector and carries the
    ``perfect_pi`` idealization flag."""
    th, ph, gm = params.theta, params.phi, params.gamma
    segments = (
        PulseSegment(th, ph - np.pi / 2.0, rabi),
        PulseSegment(np.pi / 2.0, ph + gm + np.pi, rabi),
        PulseSegment(np.pi, ph + gm + 3.0 * np.pi / 2.0, rabi, delta_suppressed=perfect_pi),
        PulseSegment(np.pi / 2.0, ph + gm + np.pi, rabi),
        PulseSegment(np.pi - th, ph - np.pi / 2.0, rabi),
    )
    return PulseSequence(segments, GateFamily.OPTIMIZED_GEOMETRIC, params)


def two_pi_sequence(params: GateParams, rabi: float = 1.0) -> PulseSequence:
    """Two inserted pi-pulses, seven segments, total area ``4*pi``.

    Requires ``theta <= pi/2``; gates with larger polar angle have no
    realization in this schedule (the closing segment area would be
    negative) and are rejected rather than silently re-parameterized.
    """
    th, ph, gm = params.theta, params.phi, params.gamma
    if th > np.pi / 2.0 + 1e-12:
        raise ValueError(f"two-pi sequence requires theta <= pi/2, got {th}")
    closing_area = max(0.0, np.pi / 2.0 - th)
    segments = (
        PulseSegment(th, ph - np.pi / 2.0, rabi),
        PulseSegment(np.pi / 2.0, ph + gm + np.pi / 2.0, rabi),
        PulseSegment(np.pi, ph + gm + np.pi, rabi),
        PulseSegment(np.pi / 2.0, ph + gm + np.pi / 2.0, rabi),
        PulseSegment(np.pi / 2.0, ph - np.pi / 2.0, rabi),
        PulseSegment(np.pi, ph, rabi),
        PulseSegment(closing_area, ph - np.pi / 2.0, rabi),
    )
    return PulseSequence(segments, GateFamily.TWO_PI_CORRECTED, params)


def dynamical_rotation(phase: float, chi: float, rabi: float = 1.0) -> PulseSequence:
    """Single resonant pulse: rotation by `chi` about the equatorial axis at
    azimuth `phase`.  Negative `chi` is folded into a phase shift of pi."""
    if chi < 0.0:
        phase, chi = phase + np.pi, -chi
    params = rotation_to_gate_params(
        np.array([math.cos(phase), math.sin(phase), 0.0]), chi
    )
    segments = () if chi == 0.0 else (PulseSegment(chi, phase, rabi),)
    return PulseSequence(segments, GateFamily.NAIVE_DYNAMICAL, params)


def xyx_decompose(target: np.ndarray, atol: float = 1e-10) -> tuple[float, float, float]:
    """Euler angles ``(chi_a, chi_b, chi_c)`` with
    ``R_x(chi_c) R_y(chi_b) R_x(chi_a) = target`` up to global phase.

    Computed by conjugating with the Hadamard (x<->z, y->-y) and running a
    z-y-z extraction.  At gimbal lock (``chi_b in {0, pi}``) the split
    between ``chi_a`` and ``chi_c`` is arbitrary; ``chi_c = 0`` is chosen.
    """
    target = np.asarray(target, dtype=complex)
    if not is_unitary(target, atol=atol):
        raise ValueError(f"target is not unitary to within {atol}")
    v = _HADAMARD @ target @ _HADAMARD
    v = v / np.sqrt(np.linalg.det(v))
    abs00, abs10 = abs(v[0, 0]), abs(v[1, 0])
    b = 2.0 * math.atan2(abs10, abs00)
    if abs10 < 1e-12:
        a, c = -2.0 * np.angle(v[0, 0]), 0.0
    elif abs00 < 1e-12:
        a, c = -2.0 * np.angle(v[1, 0]), 0.0
    else:
        apc = -2.0 * np.angle(v[0, 0])
        amc = -2.0 * np.angle(v[1, 0])
        a, c = (apc + amc) / 2.0, (apc - amc) / 2.0
    # zyz angles (a, b, c) of H U H give xyx angles (a, -b, c) of U.
    # R_z(c) R_y(b) R_z(a) = R_z(c+pi) R_y(-b) R_z(a-pi) up to phase: pick
    # the branch with the smaller total pulse area.
    candidates = [
        (_wrap(a), _wrap(-b), _wrap(c)),
        (_wrap(a - np.pi), _wrap(b), _wrap(c + np.pi)),
    ]
    return min(candidates, key=lambda chis: sum(abs(x) for x in chis))


def xyx_sequence(target: np.ndarray, rabi: float = 1.0) -> PulseSequence:
    """Naive-dynamical realization of an arbitrary unitary: up to three
    one-piece x/y pulses from :func:`xyx_decompose` (zero-area pieces are
    dropped)."""
    chi_a, chi_b, chi_c = xyx_decompose(target)
    segments = []
    for chi, base_phase in ((chi_a, 0.0), (chi_b, np.pi / 2.0), (chi_c, 0.0)):
        if abs(chi) < 1e-12:
            continue
        phase = base_phase + (np.pi if chi < 0.0 else 0.0)
        segments.append(PulseSegment(abs(chi), phase, rabi))
    return PulseSequence(tuple(segments), GateFamily.NAIVE_DYNAMICAL, None)


_SEQUENCE_BUILDERS = {
    GateFamily.CONVENTIONAL_GEOMETRIC: conventional_sequence,
    GateFamily.TWO_PI_CORRECTED: two_pi_sequence,
}


def gate_sequence(
    family: GateFamily | str,
    axis: np.ndarray,
    chi: float,
    perfect_pi: bool = False,
    rabi: float = 1.0,
) -> PulseSequence:
    """Realize a rotation by `chi` about `axis` in the given family.

    The rotation is first folded onto its minimal-angle representative
    (``chi in [0, pi]``, axis flipped as needed): the loop constructions
    are second-order-optimal on that branch, and the two-pi schedule in
    addition requires the axis in the upper hemisphere.
    """
    family = GateFamily.coerce(family)
    axis, chi = canonical_rotation(axis, chi)
    if family is GateFamily.TWO_PI_CORRECTED and axis[2] < -1e-12:
        axis, chi = -axis, 2.0 * np.pi - chi  # long branch keeps theta <= pi/2
    if family is GateFamily.NAIVE_DYNAMICAL:
        seq = xyx_sequence(su2_exp(axis, chi), rabi=rabi)
        return dataclasses.replace(seq, params=rotation_to_gate_params(axis, chi))
    params = rotation_to_gate_params(axis, chi)
    if family is GateFamily.OPTIMIZED_GEOMETRIC:
        return optimized_sequence(params, perfect_pi=perfect_pi, rabi=rabi)
    return _SEQUENCE_BUILDERS[family](params, rabi=rabi)


_AXES = {"X": (1.0, 0.0, 0.0), "Y": (0.0, 1.0, 0.0), "Z": (0.0, 0.0, 1.0)}


def named_rotation(name: str) -> tuple[np.ndarray, float]:
    """Parse gate names like ``X/2`` (pi/2 about x) or ``Z/4`` (pi/4 about z)
    into an (axis, angle) pair.  Plain ``X``/``Y``/``Z`` mean pi rotations.
    """
    label = name.strip().upper()
    if "/" in label:
        axis_part, frac = label.split("/", 1)
        angle = np.pi / float(frac)
    else:
        axis_part, angle = label, np.pi
    try:
        axis = np.array(_AXES[axis_part])
    except KeyError:
        raise ValueError(f"unknown rotation name: {name!r}") from None
    return axis, float(angle)


def _wrap(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.fmod(angle + np.pi, 2.0 * np.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * np.pi
    return wrapped - np.pi


def verify_sequence(seq: PulseSequence, atol: float = 1e-9) -> float:
    """Trace fidelity of the noiseless propagation against the sequence's
    own target; raises if the sequence carries no target params."""
    from .evolution import propagate  # local import: avoid cycle

    if seq.params is None:
        raise ValueError("sequence carries no target parameters")
    return trace_fidelity(target_unitary(seq.params), propagate(seq))


__all__ = [
    "GateFamily",
    "GEOMETRIC_FAMILIES",
    "GateParams",
    "PulseSegment",
    "PulseSequence",
    "conventional_sequence",
    "optimized_sequence",
    "two_pi_sequence",
    "dynamical_rotation",
    "xyx_decompose",
    "xyx_sequence",
    "gate_sequence",
    "target_unitary",
    "rotation_to_gate_params",
    "verify_sequence",
]
