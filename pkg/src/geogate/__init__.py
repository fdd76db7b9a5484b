"""geogate: pulse-level simulation and verification of dynamically corrected
single-qubit geometric gates under off-resonance and amplitude errors."""

from .su2 import (
    IDENTITY,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    AxisAngle,
    axis_angle_decompose,
    canonical_rotation,
    su2_exp,
    trace_fidelity,
)
from .pulses import (
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
from .evolution import (
    StaticError,
    Trajectory,
    analytic_fidelity,
    cyclic_phase_check,
    dressed_states,
    fidelity_scan,
    loop_closure_infidelity,
    parallel_transport_residual,
    propagate,
    propagate_sampled,
)
from .benchmarking import (
    RBConfig,
    RBCurve,
    RBFit,
    clifford_group,
    compile_clifford,
    fit_rb,
    run_interleaved_rb,
    run_standard_rb,
)
from .filterfunc import (
    NoiseSpectrum,
    control_matrix,
    ff_fidelity,
    fidelity_table,
    filter_function,
    fourier_control,
    infrared_cutoff_sweep,
)
from .lindblad import (
    LindbladParams,
    evolve_master,
    lindblad_rhs,
    relaxation_added_infidelity,
)

__version__ = "0.1.0"
