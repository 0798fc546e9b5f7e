"""Quantum correlation measures and an identity-verification harness.

Core objects: labeled states (`SystemLayout`, `PureState`,
`DensityOperator`), entropies, POVM-optimized discord and classical
correlations, entanglement of formation and of purification, and the
operational quantities (merging cost, dense-coding advantage) tied
together by exact monogamy identities on pure tripartite states.
"""

from .backend import BACKEND_NAME
from .entanglement import (
    EnsembleDecomposition,
    PurificationSplit,
    concurrence,
    entanglement_of_purification,
    eof_ensemble,
    eof_two_qubit,
    ep_sweep,
)
from .entropy import (
    BipartiteSplit,
    ProbDist,
    binary_entropy,
    coherent_information,
    conditional_entropy,
    mutual_information,
    shannon_entropy,
    subsystem_entropy,
    von_neumann_entropy,
)
from .errors import (
    DimensionError,
    DomainError,
    EnsembleBudgetError,
    InvalidState,
    LabelCollision,
    OutcomeBudgetError,
    QcorrError,
    RouteUnavailable,
    SplitBudgetError,
    StateFormatError,
    UnknownLabel,
)
from .measurements import (
    MeasurementParams,
    Povm,
    classical_correlation,
    computational_povm,
    decode_params,
    discord,
    measured_conditional_entropy,
    projective_povm,
)
from .optimize import OptimizerConfig, OptResult
from .rng import RandomSource
from .stateio import load_state, save_state
from .states import (
    DensityOperator,
    PureState,
    QuantumChannel,
    SystemLayout,
    apply_channel,
    haar_random_pure,
    haar_random_unitary,
    identity_channel,
    layout,
    marginal,
    partial_trace,
    purify,
    qubits,
    random_isometry,
    replace_channel,
    tensor,
)
from .tasks import (
    ChannelParams,
    DcDiscordDifference,
    EsmCost,
    HpResidual,
    TripartiteRoles,
    dc_advantage_sweep,
    dc_capacity,
    dc_discord_difference,
    dense_coding_advantage,
    discord_asymmetry,
    discord_koashi_winter,
    discord_variational,
    esm_total_cost,
    horodecki_piani_residual,
    koashi_winter_residual,
)

__version__ = "0.1.0"
