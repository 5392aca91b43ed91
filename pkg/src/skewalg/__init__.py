"""Exact computations with skew group algebras of finite-dimensional algebras."""

from .algebra import (
    Algebra,
    PosetData,
    QuiverPresentation,
    build_incidence_algebra,
    build_path_algebra,
    fingerprint,
    morita_fingerprint,
    truncated_polynomial,
)
from .errors import ResourceCapExceeded, SkewAlgError
from .groups import (
    AlgebraAction,
    PermGroup,
    extend_from_generators,
    fixed_subalgebra,
    generate_group,
    path_action,
    poset_action,
    sylow_subgroup,
    trivial_action,
    trivial_group,
)
from .koszul import grade_algebra, grade_skew, is_koszul_up_to, koszul_transfer_check
from .modules import Representation, gldim_bounded, is_projective, is_summand, resolve
from .oracle import RepTypeOracle
from .skew import (
    SkewAlgebra,
    bimodule_structure,
    build_skew,
    classify_auslander,
    classify_gldim,
    classify_reptype,
    morita_reduce,
    skew_radical,
)
from .transporter import build_transporter, classify_transporter, skeleton

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "AlgebraAction",
    "PermGroup",
    "PosetData",
    "QuiverPresentation",
    "Representation",
    "RepTypeOracle",
    "ResourceCapExceeded",
    "SkewAlgError",
    "SkewAlgebra",
    "bimodule_structure",
    "build_incidence_algebra",
    "build_path_algebra",
    "build_skew",
    "build_transporter",
    "classify_auslander",
    "classify_gldim",
    "classify_reptype",
    "classify_transporter",
    "extend_from_generators",
    "fingerprint",
    "fixed_subalgebra",
    "generate_group",
    "gldim_bounded",
    "grade_algebra",
    "grade_skew",
    "is_koszul_up_to",
    "is_projective",
    "is_summand",
    "koszul_transfer_check",
    "morita_fingerprint",
    "morita_reduce",
    "path_action",
    "poset_action",
    "resolve",
    "skeleton",
    "skew_radical",
    "sylow_subgroup",
    "trivial_action",
    "trivial_group",
    "truncated_polynomial",
]
