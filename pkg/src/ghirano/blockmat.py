"""Hirano inverses of 2x2 block matrices ``M = [[A, B], [C, D]]``.

Each check evaluates its hypotheses first and raises
:class:`~ghirano.errors.PreconditionError` naming the first one that fails,
e.g. ``"BC=CB=0"``. ``A`` is p x p and ``D`` is q x q; ``p`` and ``q`` may
differ.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_POLICY,
    NumericPolicy,
    _freeze,
    as_block,
    as_cmatrix,
    eye,
    fro,
    operand_scale,
)
from .errors import DimensionError, PreconditionError
from .hirano import has_hirano
from .spectral import drazin_inverse


@dataclass(frozen=True)
class Block2x2:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    assembled: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        A = as_cmatrix(self.A)
        D = as_cmatrix(self.D)
        B = as_block(self.B)
        C = as_block(self.C)
        p, q = A.shape[0], D.shape[0]
        if B.shape != (p, q):
            raise DimensionError(f"B must be {p}x{q}, got {B.shape[0]}x{B.shape[1]}")
        if C.shape != (q, p):
            raise DimensionError(f"C must be {q}x{p}, got {C.shape[0]}x{C.shape[1]}")
        for name, value in zip("ABCD", (A, B, C, D)):
            object.__setattr__(self, name, value)
        object.__setattr__(self, "assembled", _freeze(np.block([[A, B], [C, D]])))

    @property
    def sizes(self) -> tuple[int, int]:
        return self.A.shape[0], self.D.shape[0]


@dataclass(frozen=True)
class SchurData:
    """``W = A A^d + A^d B C A^d`` and whether ``D = C A^d B``."""

    W: np.ndarray
    schur_ok: bool


def _zero(x, pol, *factors) -> bool:
    return fro(x) <= pol.tol_residual * operand_scale(*factors)


def _equal(x, y, pol, *factors) -> bool:
    return _zero(x - y, pol, *factors)


def _require(ok: bool, condition: str) -> None:
    if not ok:
        raise PreconditionError(condition)


def _require_hirano(m: Block2x2, pol) -> None:
    _require(has_hirano(m.A, pol), "A has generalized Hirano inverse")
    _require(has_hirano(m.D, pol), "D has generalized Hirano inverse")


def triangular_hirano(m: Block2x2, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """Block upper-triangular case ``C = 0``."""
    _require(_zero(m.C, pol, m.A, m.D), "C=0")
    _require_hirano(m, pol)
    return has_hirano(m.assembled, pol)


def _common_conditions(m: Block2x2, pol):
    A, B, C, D = m.A, m.B, m.C, m.D
    _require_hirano(m, pol)
    _require(_zero(B @ C, pol, B, C) and _zero(C @ B, pol, C, B), "BC=CB=0")
    ip, iq = eye(A.shape[0]), eye(D.shape[0])
    a_pi = drazin_inverse(A, pol).spec_idem
    d_pi = drazin_inverse(D, pol).spec_idem
    return A, B, C, D, ip, iq, a_pi, d_pi


def cross_split_hirano(m: Block2x2, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """Hirano test of ``M`` when B and C link the core of one corner to the nilpotent part of the other.

    Hypotheses: A, D Hirano; ``BC = CB = 0``; ``CA(I - A^pi) = D^pi D C``;
    ``A^pi A B = B D (I - D^pi)``.
    """
    A, B, C, D, ip, iq, a_pi, d_pi = _common_conditions(m, pol)
    _require(
        _equal(C @ A @ (ip - a_pi), d_pi @ D @ C, pol, C, A, a_pi, D, d_pi),
        "CA(I-A^π)=D^πDC",
    )
    _require(
        _equal(a_pi @ A @ B, B @ D @ (iq - d_pi), pol, a_pi, A, B, D, d_pi),
        "A^πAB=BD(I-D^π)",
    )
    return has_hirano(m.assembled, pol)


def aligned_split_hirano(m: Block2x2, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """Hirano test of ``M`` when B and C link core to core and nilpotent part to nilpotent part.

    Hypotheses: A, D Hirano; ``BC = CB = 0``; ``CA(I - A^pi) = (I - D^pi) D C``;
    ``A^pi A B = B D D^pi``.
    """
    A, B, C, D, ip, iq, a_pi, d_pi = _common_conditions(m, pol)
    _require(
        _equal(C @ A @ (ip - a_pi), (iq - d_pi) @ D @ C, pol, C, A, a_pi, D, d_pi),
        "CA(I-A^π)=(I-D^π)DC",
    )
    _require(_equal(a_pi @ A @ B, B @ D @ d_pi, pol, a_pi, A, B, D, d_pi), "A^πAB=BDD^π")
    return has_hirano(m.assembled, pol)


def schur_data(m: Block2x2, pol: NumericPolicy = DEFAULT_POLICY) -> SchurData:
    A, B, C, D = m.A, m.B, m.C, m.D
    ad = drazin_inverse(A, pol).dinv
    w = A @ ad + ad @ B @ C @ ad
    ok = _equal(D, C @ ad @ B, pol, C, ad, B)
    return SchurData(_freeze(w), ok)


def schur_hirano(m: Block2x2, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """Hirano test of ``M`` with trivial generalized Schur complement ``D = C A^d B``."""
    A, B, C = m.A, m.B, m.C
    _require(has_hirano(A, pol), "A has generalized Hirano inverse")
    a_pi = drazin_inverse(A, pol).spec_idem
    sd = schur_data(m, pol)
    _require(sd.schur_ok, "D=CA^dB")
    _require(_zero(a_pi @ B @ C, pol, a_pi, B, C), "A^πBC=0")
    _require(_zero(B @ C @ a_pi, pol, B, C, a_pi), "BCA^π=0")
    _require(_zero(A @ a_pi @ B, pol, A, a_pi, B), "AA^πB=0")
    _require(has_hirano(A @ sd.W, pol), "AW has generalized Hirano inverse")
    return has_hirano(m.assembled, pol)
