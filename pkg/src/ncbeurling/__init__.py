"""Invariant subspaces and inner-outer factorization for tracial subalgebras of finite
direct sums of matrix algebras."""

from .algebra_core import (
    DEFAULT_TOL,
    FinVNAlgebra,
    adjoint,
    lp_norm,
    operator_norm,
    polar_decompose,
    positive_power,
    support_projection,
    trace,
    trace_power,
)
from .beurling import (
    TypeDecomposition,
    TypeLabel,
    classify_type,
    column_projections,
    decomposition_residuals,
    dimension_count,
    extract_partial_isometries,
    standard_generator,
    theta_projection,
    type_decomposition,
)
from .errors import (
    DomainError,
    InvariantError,
    NCBeurlingError,
    NotTracialError,
    PreconditionError,
    StructuralError,
)
from .factorization import (
    InnerOuterFactorization,
    Kind,
    bn_factorize,
    column_sum_norm_residual,
    inner_outer_sum,
    invariant_hull,
    is_outer,
    is_separating,
    is_wandering_vector,
    istr_witness,
    partial_bn_factorize,
)
from .subspace import (
    Subspace,
    WanderingData,
    from_generators,
    intersection,
    invariance_residual,
    is_invariant,
    is_simply_invariant,
    right_module_span,
    span_sum,
    wandering_subspace,
)
from .tracial import (
    NestSpec,
    TracialSubalgebra,
    a_infinity,
    build_from_basis,
    build_nest_subalgebra,
    expectation,
    is_maximal_subdiagonal,
    unique_extension_witness,
)

__version__ = "0.1.0"
