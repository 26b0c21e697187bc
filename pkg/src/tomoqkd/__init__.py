"""Numerics for tomography-based quantum key distribution.

The pipeline goes channel (or measured table) -> joint state rho_AB ->
Devetak-Winter rates for three protocols: full-tomography, qubit
reference-frame-independent, and the (d+1)-basis protocol.
"""

from .channels import (
    AffineQubitChannel,
    KrausChannel,
    PmdConfig,
    affine_to_joint_state,
    amplitude_damping_qubit,
    amplitude_damping_qutrit,
    apply_affine,
    averaged_drift_channel,
    depolarizing,
    identity_channel,
    joint_state,
    kraus_apply,
    kraus_to_affine,
    kraus_to_joint_state,
    pdl_state,
    pmd_state,
    probabilistic_rotation,
    random_kraus_channel,
    rotation,
    transmittance,
)
from .dataio import (
    read_probability_table,
    write_fixture,
    write_probability_table,
    write_sweep,
)
from .errors import (
    ClippedSpectrumWarning,
    DomainError,
    InconsistentDataError,
    InconsistentStatisticsError,
    InvalidChannelError,
    InvalidDistributionError,
    NonuniformMarginalWarning,
    NotCompletelyPositiveError,
    NotPositiveSemidefiniteError,
    ReconstructionFailureError,
    ReconstructionWarning,
    TableParseError,
    TomoqkdError,
    UnsupportedDimensionError,
    ZeroProbabilityOutcomeError,
)
from .keyrate import (
    KeyRateReport,
    RfiObservables,
    bell_lambdas,
    dplus1_rate,
    holevo_qudit,
    mutual_information_qudit,
    qst_rate,
    rfi_observables,
    rfi_rate,
    rfi_state,
)
from .qmath import (
    MubFamily,
    bell_basis,
    bell_diagonalize,
    bell_state,
    binary_entropy,
    conditional_bob_state,
    maximally_entangled_state,
    mub_family,
    shannon_entropy,
    trace_distance,
    validate_density_matrix,
    von_neumann_entropy,
    weyl_operator,
)
from .tomography import (
    BiasTable,
    JointProbabilityTable,
    ProcessMatrix,
    affine_from_biases,
    biases_from_channel,
    error_vectors,
    predict_probabilities,
    process_apply,
    process_to_joint_state,
    solve_process_matrix,
    table_from_state,
)

__version__ = "0.1.0"
