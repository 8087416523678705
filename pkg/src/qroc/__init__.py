"""ROC analysis of two-state discrimination for distributions and density operators."""

from .classical import (
    BinaryClassifier,
    Distribution,
    RocCurve,
    RocPoint,
    bhattacharyya,
    classifier_point,
    feasible_region_binary,
    minkowski_length,
    optimal_roc,
)
from .errors import (
    DimensionMismatch,
    InfeasiblePair,
    NoConvergence,
    QrocError,
    SingularState,
    ValidationError,
)
from .linalg import (
    DensityOperator,
    KrausChannel,
    Projector,
    apply_channel,
    fidelity,
    haar_random_projector,
    random_density,
    trace_distance,
    validate_density,
)
from .quantum import (
    FeasibleRegion,
    HelstromResult,
    HelstromSweep,
    TwoOutcomeMeasurement,
    feasible_region,
    helstrom,
    helstrom_sweep,
    pure_ellipse,
    pure_state,
    roc_point,
    trace_distance_readout,
)
from .similarity import (
    BhattacharyyaReport,
    fidelity_observable,
    fidelity_polyline,
    pure_b_closed_form,
    pure_b_quadrature,
    quantum_bhattacharyya,
)
from .unambiguous import UnambiguousPovm, build_povm, feasibility, success_rates

__version__ = "0.1.0"
