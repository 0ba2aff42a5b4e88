"""Kronecker-sum trace preservers and Kronecker-product determinant preservers.

Submodules
----------
core       dense complex arithmetic, determinant, exp, principal log, samplers
kron       Kronecker product/sum, vec, perfect shuffle, rearrangement, partial traces
superop    linear maps on matrices, the prime transform, RT-symmetry
preserver  characterizations of maps preserving tr(A (+) B), with a brute-force oracle
detkron    normalized trace/determinant, root-of-unity cosets, partial determinants
suite      seeded property suite (also behind ``kronpreserve suite``)
"""

from ._validation import (
    BlockDims,
    BranchError,
    NonFiniteError,
    ShapeError,
    SingularMatrixError,
    SymmetryClassError,
)
from .core import (
    anticommutator,
    commutator,
    determinant,
    mat_add,
    mat_exp,
    mat_mul,
    principal_log,
    sample_matrix,
    trace,
)
from .kron import (
    kron_product,
    kron_sum,
    partial_trace_1,
    partial_trace_2,
    perfect_shuffle,
    rearrange,
    unvec,
    vec,
)
from .superop import (
    SuperOperator,
    identity_superop,
    is_rt_hermitian,
    is_rt_skew,
    is_rt_skew_hermitian,
    is_rt_symmetric,
    left_mult,
    prime_transform,
    rearrangement_characterization,
    right_mult,
    rt_skew_part,
    rt_symmetric_part,
    superop_apply,
    superop_from_function,
    superop_from_matrix,
    superop_from_terms,
)
from .preserver import (
    KroneckerTerm,
    PreserverReport,
    check_left_mult,
    corollary_rt_check,
    corollary_traceless_iff,
    lemma_anticommutator_check,
    lemma_commutator_check,
    oracle_preserves_trace,
    random_preserver,
    synth_left_mult_preserver,
    theorem_phiprime_check,
)
from .detkron import (
    CosetMatrix,
    OmegaWitness,
    PsiMap,
    RootCoset,
    blockwise_det,
    corollary_uv,
    det_preserver_iff_trace,
    norm_det,
    norm_partial_trace,
    norm_trace,
    partial_det,
    psi_apply,
    theorem_det_rt,
)

__version__ = "0.1.0"
