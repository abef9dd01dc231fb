"""Event-structure semantics toolkit.

Configurations, branching cells and local probabilities for finite
event structures (binary-conflict and stable), the history-renaming
translation between the two worlds, safe-net unfolding, text formats
and a batch CLI.
"""

__version__ = "0.1.0"

from eventstruct.errors import (
    EventStructError,
    NotGenerableError,
    NotRStoppedError,
    ParseError,
    PreconditionError,
    TruncatedStructureError,
    UnknownEventError,
    UnsafeNetError,
    ValidationError,
)
from eventstruct.prime import (
    PrimeES,
    configurations,
    future,
    immediate_conflict,
    maximal_configurations,
    validate_prime,
)
from eventstruct.stable import (
    LocalHistory,
    Rule,
    StableES,
    as_stable,
    check_conflict_driven,
    check_sensible,
    configurations_ses,
    conflict,
    enables,
    future_ses,
    immediate_conflict_ses,
    is_consistent,
    local_history,
    star_histories,
    validate_stable,
)
from eventstruct.cells import (
    Analyzer,
    BranchingCell,
    Covering,
    StoppingPrefix,
    check_cell_isomorphism,
    check_cells_flat,
    check_confusion,
    check_jump_free,
    check_locally_finite,
    check_pre_regular,
    covering,
    enabled_cells,
    is_stopping_prefix,
    minimal_stopping_prefix,
    valid_decomposition,
)
from eventstruct.nets import SafeNet, unfold_net, validate_net
from eventstruct.probability import (
    CellDistribution,
    LocallyRandomizedES,
    attach_distributions,
    global_measure,
    likelihood,
    sample_run,
    shadow_probability,
)
from eventstruct.translate import (
    Morphism,
    ThetaResult,
    associated_es,
    binary_conflict_generable,
    domains_isomorphic,
    theta,
)

__all__ = [
    "__version__",
    "EventStructError",
    "ValidationError",
    "UnknownEventError",
    "ParseError",
    "PreconditionError",
    "NotRStoppedError",
    "NotGenerableError",
    "UnsafeNetError",
    "TruncatedStructureError",
    "PrimeES",
    "validate_prime",
    "configurations",
    "maximal_configurations",
    "future",
    "immediate_conflict",
    "StableES",
    "Rule",
    "LocalHistory",
    "validate_stable",
    "configurations_ses",
    "is_consistent",
    "enables",
    "local_history",
    "conflict",
    "immediate_conflict_ses",
    "star_histories",
    "check_sensible",
    "check_conflict_driven",
    "as_stable",
    "future_ses",
    "Analyzer",
    "BranchingCell",
    "Covering",
    "StoppingPrefix",
    "is_stopping_prefix",
    "minimal_stopping_prefix",
    "enabled_cells",
    "valid_decomposition",
    "covering",
    "check_pre_regular",
    "check_locally_finite",
    "check_jump_free",
    "check_cells_flat",
    "check_cell_isomorphism",
    "check_confusion",
    "SafeNet",
    "validate_net",
    "unfold_net",
    "CellDistribution",
    "LocallyRandomizedES",
    "attach_distributions",
    "likelihood",
    "global_measure",
    "shadow_probability",
    "sample_run",
    "Morphism",
    "ThetaResult",
    "theta",
    "binary_conflict_generable",
    "associated_es",
    "domains_isomorphic",
]
