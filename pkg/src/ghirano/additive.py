"""Sums and products of Hirano-invertible matrices.

Under weak commutation (``a^2 b = aba`` and ``b^2 a = bab``) the product
``ab`` keeps a Hirano inverse, and ``a + b`` has one exactly when
``I + a^d b`` does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_POLICY,
    NumericPolicy,
    as_cmatrix,
    commutes,
    eye,
    fro,
    operand_scale,
    same_shape,
)
from .errors import PreconditionError
from .hirano import has_hirano
from .spectral import drazin_inverse, gs_drazin


def _weakly_commute(a, b, pol) -> bool:
    scale = operand_scale(a, a, b) + operand_scale(a, b, b)
    return (
        fro(a @ a @ b - a @ b @ a) <= pol.tol_residual * scale
        and fro(b @ b @ a - b @ a @ b) <= pol.tol_residual * scale
    )


@dataclass(frozen=True)
class PairInstance:
    a: np.ndarray
    b: np.ndarray
    weak_comm: bool
    full_comm: bool
    both_hirano: bool
    family: str = ""

    @classmethod
    def build(cls, a, b, pol: NumericPolicy = DEFAULT_POLICY, family: str = ""):
        a = as_cmatrix(a)
        b = as_cmatrix(b)
        same_shape(a, b)
        full = commutes(a, b, pol)
        # ab = ba gives both identities exactly
        weak = full or _weakly_commute(a, b, pol)
        both = has_hirano(a, pol) and has_hirano(b, pol)
        return cls(a, b, weak, full, both, family)


def _require_pair(p: PairInstance) -> None:
    if not p.weak_comm:
        raise PreconditionError("a^2b=aba and b^2a=bab")
    if not p.both_hirano:
        raise PreconditionError("a, b have generalized Hirano inverses")


def product_hirano(p: PairInstance, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    _require_pair(p)
    return has_hirano(p.a @ p.b, pol)


def additive_equiv(p: PairInstance, pol: NumericPolicy = DEFAULT_POLICY) -> tuple[bool, bool]:
    """``(has_hirano(a + b), has_hirano(I + a^d b))``; the two must agree."""
    _require_pair(p)
    ad = drazin_inverse(p.a, pol).dinv
    n = p.a.shape[0]
    return has_hirano(p.a + p.b, pol), has_hirano(eye(n) + ad @ p.b, pol)


def split_sufficient(a, b, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """Hirano test of ``a + b`` when ``a^2 + ab`` and ``b^2 + ab`` split and ``a^2 b + a b^2 = 0``."""
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    same_shape(a, b)
    ab = a @ b
    if gs_drazin(a @ a + ab, pol) is None:
        raise PreconditionError("a^2+ab has gs-Drazin inverse")
    if gs_drazin(b @ b + ab, pol) is None:
        raise PreconditionError("b^2+ab has gs-Drazin inverse")
    scale = operand_scale(a, a, b) + operand_scale(a, b, b)
    if fro(a @ ab + ab @ b) > pol.tol_residual * scale:
        raise PreconditionError("a^2b+ab^2=0")
    return has_hirano(a + b, pol)


def orthogonal_sum(a, b, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """Hirano test of ``a + b`` for Hirano ``a``, ``b`` with ``ab = 0``."""
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    same_shape(a, b)
    if not has_hirano(a, pol):
        raise PreconditionError("a has generalized Hirano inverse")
    if not has_hirano(b, pol):
        raise PreconditionError("b has generalized Hirano inverse")
    if fro(a @ b) > pol.tol_residual * operand_scale(a, b):
        raise PreconditionError("ab=0")
    return has_hirano(a + b, pol)
