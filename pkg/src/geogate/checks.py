"""Internal consistency checks: analytic-vs-numeric fidelity expansions and
the geometric-evolution conditions.

These run as the ``check`` CLI command and are also exercised directly by
the test suite.  The geometric checks accept builder overrides so a
deliberately corrupted schedule can be shown to fail.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .evolution import (
    StaticError,
    analytic_fidelity,
    cyclic_phase_check,
    parallel_transport_profile,
    propagate,
)
from .pulses import (
    GateFamily,
    GateParams,
    conventional_sequence,
    gate_sequence,
    optimized_sequence,
    target_unitary,
)
from .su2 import su2_exp, trace_fidelity

X_AXIS = np.array([1.0, 0.0, 0.0])
TAYLOR_ANGLES = (np.pi / 6, np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail}"


def _x_rotation_fidelity(family, chi: float, err: StaticError, perfect_pi=False) -> float:
    seq = gate_sequence(family, X_AXIS, chi, perfect_pi=perfect_pi)
    return trace_fidelity(su2_exp(X_AXIS, chi), propagate(seq, err))


def taylor_checks(tol: float = 1e-8) -> list[CheckResult]:
    """Numeric propagation against the printed second-order expansions at
    delta (epsilon) = 1e-3, plus remainder-scaling and the two-pi family's
    qualitative inferiority under off-resonance error."""
    results = []
    magnitude = 1e-3
    cases = [
        ("naive", "offresonance"),
        ("geo", "offresonance"),
        ("opt", "offresonance"),
        ("naive", "amplitude"),
        ("geo", "amplitude"),
    ]
    for family, kind in cases:
        worst = 0.0
        for chi in TAYLOR_ANGLES:
            err = (
                StaticError(delta=magnitude)
                if kind == "offresonance"
                else StaticError(epsilon=magnitude)
            )
            numeric = _x_rotation_fidelity(family, chi, err)
            analytic = analytic_fidelity(family, kind, chi, magnitude)
            worst = max(worst, abs(numeric - analytic))
        results.append(
            CheckResult(
                f"taylor/{family}-{kind}",
                worst <= tol,
                f"max |numeric - analytic| = {worst:.3e} (tol {tol:.0e})",
            )
        )

    # remainder scaling: halving delta shrinks the defect by >= ~2^3
    worst_ratio = np.inf
    for family in ("naive", "geo", "opt"):
        for chi in TAYLOR_ANGLES:
            defects = []
            for delta in (2e-2, 1e-2, 5e-3):
                numeric = _x_rotation_fidelity(family, chi, StaticError(delta=delta))
                defects.append(abs(numeric - analytic_fidelity(family, "offresonance", chi, delta)))
            for a, b in zip(defects, defects[1:]):
                if a > 1e-13:  # skip round-off-dominated pairs
                    worst_ratio = min(worst_ratio, a / max(b, 1e-300))
    results.append(
        CheckResult(
            "taylor/remainder-order",
            worst_ratio >= 6.0,
            f"min defect shrink per delta-halving = {worst_ratio:.2f} (want >= 6 ~ O(d^3))",
        )
    )

    # two-pi family: never better than the other three under off-resonance
    ok = True
    worst_gap = 0.0
    for chi in (np.pi / 6, np.pi / 4, np.pi / 2):
        for delta in np.linspace(-0.1, 0.1, 9):
            if delta == 0.0:
                continue
            err = StaticError(delta=delta)
            f_twopi = _x_rotation_fidelity("twopi", chi, err)
            others = [_x_rotation_fidelity(f, chi, err) for f in ("naive", "geo", "opt")]
            gap = f_twopi - min(others)
            worst_gap = max(worst_gap, gap)
            if gap > 1e-12:
                ok = False
    results.append(
        CheckResult(
            "taylor/two-pi-not-better",
            ok,
            f"max F_twopi - min(F_others) = {worst_gap:.3e} over |delta| <= 0.1",
        )
    )
    return results


def geometric_checks(
    conventional_builder: Callable[[GateParams], object] = conventional_sequence,
    optimized_builder: Callable[[GateParams], object] = optimized_sequence,
    grid: int = 4,
    phase_tol: float = 1e-9,
    closure_tol: float = 1e-12,
    transport_tol: float = 1e-9,
) -> list[CheckResult]:
    """Cyclic-phase, loop-closure and parallel-transport conditions on a
    parameter grid.

    Expectations encode the loop parities: the conventional (2*pi) loop
    returns phases ``+-gamma``; the optimized (3*pi) loop returns
    ``+-gamma + pi`` and its correcting pi-pulse sits at residual exactly
    1/2 while all other segments parallel-transport.
    """
    thetas = np.linspace(0.1, np.pi - 0.1, grid)
    phis = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    gammas = np.linspace(-np.pi + 0.2, np.pi - 0.2, grid)
    worst = {
        "conv-phase": 0.0, "conv-closure": 0.0, "conv-transport": 0.0,
        "opt-phase": 0.0, "opt-closure": 0.0, "opt-transport-outer": 0.0,
        "opt-corrector-dev": 0.0, "gate-equiv": 0.0,
    }
    for theta in thetas:
        for phi in phis:
            for gamma in gammas:
                params = GateParams(theta, phi, gamma)
                target = target_unitary(params)

                conv = conventional_builder(params)
                cp = cyclic_phase_check(conv)
                worst["conv-phase"] = max(
                    worst["conv-phase"],
                    abs(np.exp(1j * cp.phase_plus) - np.exp(1j * gamma)),
                    abs(np.exp(1j * cp.phase_minus) - np.exp(-1j * gamma)),
                )
                worst["conv-closure"] = max(worst["conv-closure"], cp.closure_defect)
                profile = parallel_transport_profile(conv, resolution=32)
                worst["conv-transport"] = max(worst["conv-transport"], profile.max())

                opt = optimized_builder(params)
                cp = cyclic_phase_check(opt)
                worst["opt-phase"] = max(
                    worst["opt-phase"],
                    abs(np.exp(1j * cp.phase_plus) + np.exp(1j * gamma)),
                    abs(np.exp(1j * cp.phase_minus) + np.exp(-1j * gamma)),
                )
                worst["opt-closure"] = max(worst["opt-closure"], cp.closure_defect)
                profile = parallel_transport_profile(opt, resolution=32)
                corrector = len(profile) // 2
                outer = np.delete(profile, corrector)
                worst["opt-transport-outer"] = max(worst["opt-transport-outer"], outer.max())
                worst["opt-corrector-dev"] = max(
                    worst["opt-corrector-dev"], abs(profile[corrector] - 0.5)
                )
                worst["gate-equiv"] = max(
                    worst["gate-equiv"],
                    1.0 - trace_fidelity(target, propagate(conv)),
                    1.0 - trace_fidelity(target, propagate(opt)),
                )
    spec = [
        ("geometric/conventional-cyclic-phase", worst["conv-phase"], phase_tol),
        ("geometric/conventional-loop-closure", worst["conv-closure"], closure_tol),
        ("geometric/conventional-parallel-transport", worst["conv-transport"], transport_tol),
        ("geometric/optimized-cyclic-phase(parity -1)", worst["opt-phase"], phase_tol),
        ("geometric/optimized-loop-closure", worst["opt-closure"], closure_tol),
        ("geometric/optimized-outer-parallel-transport", worst["opt-transport-outer"], transport_tol),
        ("geometric/optimized-corrector-residual=1/2", worst["opt-corrector-dev"], 1e-9),
        ("geometric/zero-noise-gate-equivalence", worst["gate-equiv"], 1e-10),
    ]
    return [
        CheckResult(name, value <= tol, f"worst = {value:.3e} (tol {tol:.0e})")
        for name, value, tol in spec
    ]


def run_all_checks(
    conventional_builder=conventional_sequence,
    optimized_builder=optimized_sequence,
    grid: int = 4,
) -> list[CheckResult]:
    return taylor_checks() + geometric_checks(
        conventional_builder=conventional_builder,
        optimized_builder=optimized_builder,
        grid=grid,
    )


__all__ = ["CheckResult", "taylor_checks", "geometric_checks", "run_all_checks"]
