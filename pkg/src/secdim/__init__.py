"""Exact interpolation over prime fields for dimensions of joins of secant
and tangential varieties of Segre-Veronese embeddings of products of
projective spaces."""

from .ambient import (
    AmbientSpace,
    DivisorKind,
    DivisorSpec,
    Multidegree,
    basis_size,
    monomial_basis,
    residual_system,
    trace_system,
)
from .dimension import (
    BudgetExceededError,
    DimensionReport,
    SamplingProtocol,
    SecantDimension,
    cohomology,
    is_tangential_defective,
    secant_dimension,
)
from .exactlin import (
    DEFAULT_PRIME,
    SECOND_PRIME,
    FieldElement,
    Matrix,
    RngStream,
    rank,
)
from .horace import (
    AlphaDecomposition,
    CriticalPair,
    HoraceStepReport,
    alpha_decomposition,
    critical_pairs,
    horace_step,
    verify_type_table,
)
from .schemes import (
    ComponentKind,
    DirectionMode,
    PlacementConstraint,
    RealizationError,
    RealizedScheme,
    SchemeGroup,
    SchemeSpec,
    condition_matrix,
    condition_rows,
    realize,
    trace_residual_split,
)

__version__ = "0.1.0"
