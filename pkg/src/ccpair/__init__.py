"""Norms on C^2 defined by pairs of matrices, and contractive versus completely
contractive linear maps out of their duals."""

from .anorm import MatrixPair, a_norm, dual_norm_numeric, dual_norm_parabola
from .canonical import CanonicalClass, LinearMove, apply_moves, classify, is_simdiag
from .contractivity import UVParams, VPair, cc_bound, inf_g, is_contractive_uv, lv_norm, testfn_sup
from .errors import (
    CCPairError,
    DegenerateInput,
    DimensionError,
    InvalidPair,
    NotApplicable,
    NotUnitary,
    ParseError,
    SearchFailure,
    ShapeError,
)
from .kernels import BACKEND
from .search import Certificate, SearchConfig, search, theorem5_witness

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CCPairError",
    "CanonicalClass",
    "Certificate",
    "DegenerateInput",
    "DimensionError",
    "InvalidPair",
    "LinearMove",
    "MatrixPair",
    "NotApplicable",
    "NotUnitary",
    "ParseError",
    "SearchConfig",
    "SearchFailure",
    "ShapeError",
    "UVParams",
    "VPair",
    "a_norm",
    "apply_moves",
    "cc_bound",
    "classify",
    "dual_norm_numeric",
    "dual_norm_parabola",
    "inf_g",
    "is_contractive_uv",
    "is_simdiag",
    "lv_norm",
    "search",
    "testfn_sup",
    "theorem5_witness",
    "__version__",
]
