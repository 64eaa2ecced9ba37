"""Exact computer algebra for polynomial integro-differential operators."""

from .scalars import QQ, QQI, Field, Scalar
from .operators import Operator, principal_left_ideal_membership
from .action import is_zero_by_action, to_matrix
from .modules import (
    DSet,
    Fiber,
    ModuleWindow,
    Orbit,
    annihilator_dset,
    block_decompose,
    build_Ms,
    build_simple,
    decompose_weight,
    dualize,
    fiber,
    induce,
    split_extension,
    window_isomorphism,
)
from .classify import (
    BandOrbit,
    KroneckerBlockLabel,
    KroneckerRep,
    band_module,
    is_indecomposable,
    kronecker_decompose,
    kronecker_decompose_with_iso,
    modules_isomorphic,
    rep_type,
    string_module,
)

__all__ = [
    "Scalar", "Field", "QQ", "QQI",
    "Operator", "principal_left_ideal_membership",
    "is_zero_by_action", "to_matrix",
    "DSet", "Fiber", "ModuleWindow", "Orbit",
    "annihilator_dset", "block_decompose", "build_Ms", "build_simple",
    "decompose_weight", "dualize", "fiber", "induce",
    "split_extension", "window_isomorphism",
    "BandOrbit", "KroneckerBlockLabel", "KroneckerRep",
    "band_module", "is_indecomposable",
    "kronecker_decompose", "kronecker_decompose_with_iso",
    "modules_isomorphic", "rep_type", "string_module",
]
__version__ = "0.1.0"
