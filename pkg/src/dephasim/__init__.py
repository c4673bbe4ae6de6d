"""System-environment entanglement for piecewise-constant pure-dephasing models.

The package evolves a finite system coupled to a truncated bosonic (or
explicit matrix) environment through Hamiltonians that commute with a fixed
system basis, and evaluates separability criteria, a qubit entanglement
measure, coherence curves and negativity along the way. See README for the
CLI and the configuration schema.
"""

from .config import (
    CoherentEnv,
    FockEnv,
    MatrixFileEnv,
    OutputFlags,
    QubitBosonModel,
    RunConfig,
    ScheduleFileModel,
    ThermalEnv,
    TimeGrid,
    Tolerances,
    config_from_dict,
    parse_config,
)
from .dephasing import (
    ConditionalPropagatorSet,
    JointStateBlocks,
    ScheduleDiagnostics,
    Segment,
    SegmentSchedule,
    blocks_at,
    blocks_from_propagators,
    coherence,
    equal_superposition,
    joint_state,
    normalized_coherence,
    propagators_at,
    validate_schedule,
)
from .entanglement import (
    EntanglementReport,
    SeparabilityVerdict,
    Type1Residual,
    Type2Residual,
    build_report,
    measure_from_fidelity,
    qee_measure,
    separability_verdict,
    type1_residuals,
    type2_residuals,
)
from .errors import (
    ConfigError,
    ConvergenceFailure,
    CutoffCapExceeded,
    DephasimError,
    DimensionMismatch,
    EmptySchedule,
    NonFiniteError,
    NotHermitianError,
    NotHermitianGenerator,
    NotPSDError,
    NotQubit,
    ParseError,
    TimeOutOfRange,
    ValidationError,
    ZeroInitialCoherence,
)
from .fock import (
    EnvDensity,
    FockSpace,
    annihilation,
    coherent_amplitudes,
    coherent_state,
    creation,
    displacement,
    displacement_safe_dim,
    env_from_matrix,
    fock_state,
    number_op,
    suggest_cutoff,
    thermal_state,
)
from .linalg import (
    HermitianEigen,
    expm,
    fidelity,
    fidelity_given_sqrt,
    hermitian_eig,
    negativity,
    partial_transpose,
    sqrtm_psd,
    trace_distance,
)
from .presets import PRESET_NAMES, preset_config
from .qubit_boson import (
    AlphaSegment,
    QubitBosonParams,
    analytic_propagator_piece,
    branch_generator,
    build_schedule,
    phase1_coherence_oracle,
)
from .sweep import (
    CSV_HEADER,
    ConvergenceReport,
    SweepRow,
    convergence_report,
    emit_csv,
    run_sweep,
)

__version__ = "0.1.0"
