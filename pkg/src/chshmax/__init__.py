"""Exact maximal CHSH (2-2-2) violation for qubit-qudit quantum states.

The maximum of the Bell expectation over all dichotomic observables
reduces to an optimization over a single SO(3) rotation of the state's
Pauli-block decomposition; this package implements that reduction, the
closed-form bounds around it, the observables attaining the maximum, and
the supporting machinery (random state ensembles, an independent
alternating-ascent oracle, a qubit-qutrit case study, and a CLI).
"""

from .case_study import (
    FamilyPoint,
    GridRow,
    embed,
    grid_scan,
    log_negativity,
    qutrit_family_betas,
    qutrit_family_state,
)
from .ensembles import (
    RngStream,
    ScanStatistics,
    bures_qubit_qudit,
    bures_state,
    ginibre,
    haar_unitary,
    nonlocality_scan,
)
from .linalg import (
    TOL,
    DimensionError,
    EigenSystem,
    Tolerances,
    ValidationError,
    eigh,
    frobenius_norm_sq,
    kron,
    partial_trace_first,
    partial_transpose_second,
    sign_involution,
    trace_norm,
)
from .optimizer import (
    TSIRELSON,
    ChshResult,
    InternalConsistencyError,
    Observable2,
    ObservableD,
    OptimizerConfig,
    bell_value,
    bell_value_from_betas,
    extract_observables,
    horodecki_qubit_qubit,
    lemma_rotation_identity,
    lower_bound,
    max_chsh,
    objective,
    upper_bound,
)
from .rotations import RotationSO3
from .seesaw import SeesawReport, optimal_as_given_bs, optimal_bs_given_as, seesaw_max
from .states import (
    BetaDecomposition,
    QubitQuditState,
    StateDiagnostics,
    StateValidationError,
    bell_state,
    decompose,
    diagnose,
    maximally_mixed,
    purity,
    purity_violation_bound,
    reconstruct,
    werner_state,
)
from .stateio import AnalysisReport, analyze_state, format_state, parse_state
from .verify import BatteryResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "BatteryResult",
    "BetaDecomposition",
    "ChshResult",
    "DimensionError",
    "EigenSystem",
    "FamilyPoint",
    "GridRow",
    "InternalConsistencyError",
    "Observable2",
    "ObservableD",
    "OptimizerConfig",
    "QubitQuditState",
    "RngStream",
    "RotationSO3",
    "ScanStatistics",
    "SeesawReport",
    "StateDiagnostics",
    "StateValidationError",
    "TOL",
    "TSIRELSON",
    "Tolerances",
    "ValidationError",
    "analyze_state",
    "bell_state",
    "bell_value",
    "bell_value_from_betas",
    "bures_qubit_qudit",
    "bures_state",
    "decompose",
    "diagnose",
    "eigh",
    "embed",
    "extract_observables",
    "format_state",
    "frobenius_norm_sq",
    "ginibre",
    "grid_scan",
    "haar_unitary",
    "horodecki_qubit_qubit",
    "kron",
    "lemma_rotation_identity",
    "log_negativity",
    "lower_bound",
    "max_chsh",
    "maximally_mixed",
    "nonlocality_scan",
    "objective",
    "optimal_as_given_bs",
    "optimal_bs_given_as",
    "parse_state",
    "partial_trace_first",
    "partial_transpose_second",
    "purity",
    "purity_violation_bound",
    "qutrit_family_betas",
    "qutrit_family_state",
    "reconstruct",
    "run_verification",
    "seesaw_max",
    "sign_involution",
    "trace_norm",
    "upper_bound",
    "werner_state",
]
