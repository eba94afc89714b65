"""Decomposition, completion and rank-one approximation for fourth-order
partial-symmetric and conjugate partial-symmetric tensors."""

from .completion import (
    CompletionConfig,
    CompletionReport,
    fpc_complete,
    random_ps_mask,
    random_ps_mask_from_entries,
    relative_error,
)
from .core import (
    MaskClosureError,
    PairUnfolding,
    SampleMask,
    SymmetryClass,
    SymmetryError,
    Tensor4,
    apply_mask,
    classify_symmetry,
    fold,
    inner_product,
    outer_product_mm,
    outer_product_vvvv,
    permute_conjugate,
    project_cps,
    project_ps,
    unfold,
)
from .decompose import (
    MatrixDecomposition,
    MatrixFactor,
    RankBounds,
    SkewFactor,
    VectorPairFactor,
    cp_rank_bounds,
    decompose_skew,
    expand_vector_form,
    full_decomposition,
    rank_m,
    reconstruct,
    successive_rank1,
)
from .instances import GroundTruth, InstanceSpec, generate_instance
from .rankone import (
    Certification,
    NotRankOneError,
    Rank1CPS,
    RelaxConfig,
    SolverError,
    admm_rank_one,
    alm_rank_one,
    certify_global,
    extract_rank1,
    is_rank_one,
    plma_low_rank_approx,
    rank1_cps_tensor,
)
from .report import SolverReport
from .spectral import (
    EigenDecomposition,
    SingularDecomposition,
    hermitian_eigen,
    leading_eigenpair_abs,
    numerical_rank,
    svd,
    svt,
)

__version__ = "0.1.0"
