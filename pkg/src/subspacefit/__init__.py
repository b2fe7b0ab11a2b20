"""Optimal subspace, union-of-subspaces and shift-invariant subspace fitting."""

from .approximation import (
    DataSet,
    NotAStateError,
    Subspace,
    SymmetricFunctional,
    best_subspace,
    cost_single,
    distance_sq,
    functional_to_frame,
    phi,
)
from .fiber import (
    CyclicAction,
    FiberData,
    FiberedModel,
    best_invariant,
    fiber_decompose,
    fiber_recompose,
    is_invariant,
    pi_dimension,
    shift_operator,
)
from .linalg import (
    InputError,
    Projector,
    SvdResult,
    complement_projector,
    dft_matrix,
    orthonormalize,
    projector_from_basis,
    svd,
)
from .union import (
    FitReport,
    Partition,
    SolverConfig,
    SolverRefusal,
    UnionModel,
    assign,
    cost_union,
    exhaustive_union,
    fit_partition,
    k_subspaces,
)

__version__ = "0.1.0"
