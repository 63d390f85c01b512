"""Exact arithmetic for rational distance sets and their distance surfaces."""

from .errors import BudgetError, DomainError, IntegrityError
from .scalars import (
    GaussQuad,
    QuadExt,
    format_rational,
    gauss_conjugate,
    parse_rational,
    rational_square_root,
    squarefree_decompose,
)
from .poly import (
    LaurentPoly,
    MPoly,
    TwoForm,
    expand_product,
    partial_derivative,
    pullback_2form,
    squarefree_check,
)
from .rds import (
    PlanePoint,
    RationalDistanceSet,
    SimilarityTransform,
    collinear,
    concyclic,
    detect_k,
    dist2,
    grid_search_rational_sets,
    invert_point,
    invert_set,
    is_rational_set,
    make_set,
    normalize_set,
    point,
    rotation_scale_translate,
    select_general_position,
    set_from_json,
    verified_set,
)
from .huff import (
    GeneratedPoints,
    HuffInstance,
    HuffPoint,
    WeierstrassCurve,
    concordant_reduction,
    emit_rds,
    generate_points,
    huff_search,
    huff_verify,
)
from .surface import (
    CanonicalForm,
    CertificateReport,
    DistanceSurface,
    DivisorReport,
    GeneralTypeCertificate,
    PullbackReport,
    SingularPointRecord,
    blowup_pullback_check,
    build_surface,
    canonical_form,
    canonical_forms,
    classify_node,
    factored_affine,
    factored_form,
    factored_identity_check,
    general_type_certificate,
    hypersurface_nd,
    infinity_singularity,
    ramification_bookkeeping,
    rational_point_lift,
    singular_affine_points,
)

__version__ = "0.1.0"
