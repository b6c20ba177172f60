"""Generalized Hirano and Drazin inverses of dense complex matrices."""

from __future__ import annotations

__version__ = "0.1.0"

from .core import (
    DEFAULT_POLICY,
    ClassReport,
    Cluster,
    NumericPolicy,
    classify,
    commutes,
    eigenvalues,
    in_comm2,
    is_nilpotent,
    pinv,
    rank,
)
from .errors import (
    ClusterOverlapError,
    CrossCheckError,
    DimensionError,
    EigenSolverError,
    HiranoError,
    PreconditionError,
    ResidualError,
)
from .spectral import DrazinData, drazin_index, drazin_inverse, gs_drazin, spectral_projector
from .hirano import (
    HiranoCertificate,
    corner_hirano,
    formula_inverse,
    halves,
    has_hirano,
    hirano_inverse,
    power_hirano,
)
from .cline import (
    QuadInstance,
    cline_formula,
    hirano_transfer,
    qnil_transfer,
    quad_hypotheses,
    truncated_shift_quad,
)
from .additive import PairInstance, additive_equiv, orthogonal_sum, product_hirano, split_sufficient
from .blockmat import (
    Block2x2,
    SchurData,
    aligned_split_hirano,
    cross_split_hirano,
    schur_data,
    schur_hirano,
    triangular_hirano,
)

__all__ = [
    "__version__",
    "Block2x2",
    "ClassReport",
    "Cluster",
    "ClusterOverlapError",
    "CrossCheckError",
    "DEFAULT_POLICY",
    "DimensionError",
    "DrazinData",
    "EigenSolverError",
    "HiranoCertificate",
    "HiranoError",
    "NumericPolicy",
    "PairInstance",
    "PreconditionError",
    "QuadInstance",
    "ResidualError",
    "SchurData",
    "additive_equiv",
    "aligned_split_hirano",
    "classify",
    "cline_formula",
    "commutes",
    "corner_hirano",
    "cross_split_hirano",
    "drazin_index",
    "drazin_inverse",
    "eigenvalues",
    "formula_inverse",
    "gs_drazin",
    "halves",
    "has_hirano",
    "hirano_inverse",
    "hirano_transfer",
    "in_comm2",
    "is_nilpotent",
    "orthogonal_sum",
    "pinv",
    "power_hirano",
    "product_hirano",
    "qnil_transfer",
    "quad_hypotheses",
    "rank",
    "schur_data",
    "schur_hirano",
    "spectral_projector",
    "split_sufficient",
    "triangular_hirano",
    "truncated_shift_quad",
]
