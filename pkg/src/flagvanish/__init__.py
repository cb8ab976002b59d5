"""Workbench for cohomology of homogeneous line bundles on flag manifolds,
pointwise curvature positivity tests, and vanishing-theorem queries."""

from .bkn import (
    bkn_line_eigenvalues,
    bkn_matrix,
    check_nakano_pointwise,
    check_ks_top_degree_pointwise,
    crosscheck_line,
)
from .bott import (
    CohomologyResult,
    bott_cohomology,
    bott_flag,
    euler_characteristic,
    schur_dimension,
    serre_dual_block_weight,
)
from .curvature import (
    CurvatureTensor,
    check_ks_positive,
    check_nakano,
    det_curvature,
    dual_curvature,
    dual_twist,
    eval_form,
    grassmannian_curvature,
    pullback_curvature,
    restricted_form,
    sample_griffiths_k,
    sample_nakano_positive,
    tensor_curvature,
    tensor_from_json,
    tensor_to_json,
    twist_det,
)
from .errors import DegenerateTupleError, GeneratorFailureError, InvalidInputError
from .omega import exterior_weights, hodge_numbers, parabolic_roots, top_weight, verify_weight_bound
from .vanish import (
    Atom,
    CanonicalTwist,
    Det,
    DetTwist,
    Dual,
    FlagContext,
    Schur,
    SymPow,
    Tensor,
    TensorPow,
    WedgePow,
    check_block_gap_condition,
    glpsd_rewrite,
    infer_positivity,
    parse_bundle_expr,
    product_projective_cohomology,
    projective_twisted_hodge,
    query_vanishing,
)
from .weights import (
    BlockWeight,
    canonical_weight_complete,
    canonical_weight_flag,
    expand_block_weight,
    flag_dimension,
    sort_desc_count_inversions,
)

__version__ = "0.1.0"
