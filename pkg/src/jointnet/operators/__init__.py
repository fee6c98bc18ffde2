from .problem import (
    ReducedProblem,
    SupportSets,
    VectorizedProblem,
    build_anchor_row,
    build_Phi,
    build_Psi,
    build_Psi_weighted,
    build_reduced,
    psi_weights,
    support_sets,
)
from .vectorize import (
    build_B,
    build_Sigma,
    build_Z,
    commutator_block,
    diag_indices,
    lower_indices,
    unvec,
    unvec_stack,
    upper_indices,
    vec,
)
