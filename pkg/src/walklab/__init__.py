"""walklab: a recurrence laboratory for random walks.

Builds, validates, orders, couples, and certifies nearest-neighbor walks on
the positive quadrant, slabs, and rooted trees, plus homogeneous walks on
finitely generated abelian groups; computes the geometry of the recurrent
region of parameter space with exact rational arithmetic.
"""

from .abelian import (
    Classification,
    FGAbelianGroup,
    GroupWalkInstance,
    P_region,
    R_topology,
    Rc_properties,
    classify,
    feasible_supports,
    is_R_convex,
)
from .catalog import get as catalog_get
from .certificates import (
    IncrementDominator,
    StationaryCandidate,
    dominated_increments,
    hoeffding_certificate,
    slab_drift_certificate,
    verify_stationary,
)
from .errors import (
    DeltaOutOfRange,
    NoCertificate,
    NonPositiveDrift,
    NonSummable,
    NotSummable,
    OrderViolation,
    PreconditionFailed,
    ShapeMismatch,
    SpecValidationError,
    TooManyGenerators,
    UnknownExample,
    ZeroParentProbability,
)
from .homogeneity import homogeneity_class, slab_homogeneity
from .mc import (
    coupled_run,
    run_trajectories,
    slab_coupled_run,
    tree_run,
    zlattice_run,
)
from .models import (
    Direction,
    QuadrantWalkSpec,
    Row,
    SlabWalkSpec,
    spec_from_json,
    spec_to_json,
    validate,
)
from .networks import (
    ConductanceNetwork,
    conductances_from_walk,
    effective_conductance,
    rayleigh_check,
    return_time_compare,
    tree_counterexample,
)
from .orders import OrderKind, check_order
from .trees import ClassRule, ExplicitTreeWalk, RuleTreeWalk

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "ClassRule",
    "ConductanceNetwork",
    "DeltaOutOfRange",
    "Direction",
    "ExplicitTreeWalk",
    "FGAbelianGroup",
    "GroupWalkInstance",
    "IncrementDominator",
    "NoCertificate",
    "NonPositiveDrift",
    "NonSummable",
    "NotSummable",
    "OrderKind",
    "OrderViolation",
    "P_region",
    "PreconditionFailed",
    "QuadrantWalkSpec",
    "R_topology",
    "Rc_properties",
    "Row",
    "RuleTreeWalk",
    "ShapeMismatch",
    "SlabWalkSpec",
    "SpecValidationError",
    "StationaryCandidate",
    "TooManyGenerators",
    "UnknownExample",
    "ZeroParentProbability",
    "catalog_get",
    "check_order",
    "classify",
    "conductances_from_walk",
    "coupled_run",
    "dominated_increments",
    "effective_conductance",
    "feasible_supports",
    "homogeneity_class",
    "hoeffding_certificate",
    "is_R_convex",
    "rayleigh_check",
    "return_time_compare",
    "run_trajectories",
    "slab_coupled_run",
    "slab_drift_certificate",
    "slab_homogeneity",
    "spec_from_json",
    "spec_to_json",
    "tree_counterexample",
    "tree_run",
    "validate",
    "verify_stationary",
    "zlattice_run",
]
