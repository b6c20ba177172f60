"""Transfer of Drazin and Hirano invertibility between products.

Cline's formula ``(ba)^d = b ((ab)^d)^2 a`` moves the Drazin inverse from
``ab`` to ``ba``. The four-element version compares ``ac`` with ``bd``
under

    (ac)^2 a = (db)^2 a   and   (ac)^2 d = (db)^2 d,

which is implied by, but weaker than, ``aca = dba`` together with
``dbd = acd``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_POLICY,
    NumericPolicy,
    as_cmatrix,
    eye,
    fro,
    is_nilpotent,
    operand_scale,
    same_shape,
)
from .errors import PreconditionError, ResidualError
from .hirano import has_hirano
from .spectral import drazin_inverse

log = logging.getLogger(__name__)


def cline_residual(a, b, pol: NumericPolicy = DEFAULT_POLICY):
    """Return ``(b ((ab)^d)^2 a, relative distance to (ba)^d)``.

    Both products are ranked at the scale ``||a||_2 ||b||_2`` of their
    factors, which is where their roundoff lives.
    """
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    same_shape(a, b)
    ref = np.linalg.norm(a, 2) * np.linalg.norm(b, 2)
    abd = drazin_inverse(a @ b, pol, ref_norm=ref).dinv
    out = b @ abd @ abd @ a
    bad = drazin_inverse(b @ a, pol, ref_norm=ref).dinv
    return out, fro(out - bad) / (1.0 + fro(bad))


def cline_formula(a, b, pol: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """``b ((ab)^d)^2 a``, checked against a direct ``(ba)^d``."""
    out, res = cline_residual(a, b, pol)
    if res > pol.tol_residual:
        raise ResidualError(f"Cline's formula residual {res:.3e}", {"cline": res})
    out.flags.writeable = False
    return out


def _identity_holds(lhs, rhs, lhs_factors, rhs_factors, pol) -> bool:
    scale = max(operand_scale(*lhs_factors), operand_scale(*rhs_factors))
    return fro(lhs - rhs) <= pol.tol_residual * scale


def _hypotheses(a, b, c, d, pol) -> tuple[bool, bool]:
    ac = a @ c
    db = d @ b
    ac2 = ac @ ac
    db2 = db @ db
    weak = _identity_holds(ac2 @ a, db2 @ a, (a, c, a, c, a), (d, b, d, b, a), pol) and (
        _identity_holds(ac2 @ d, db2 @ d, (a, c, a, c, d), (d, b, d, b, d), pol)
    )
    strong = _identity_holds(ac @ a, db @ a, (a, c, a), (d, b, a), pol) and (
        _identity_holds(db @ d, ac @ d, (d, b, d), (a, c, d), pol)
    )
    return weak, strong


@dataclass(frozen=True)
class QuadInstance:
    """Four same-size matrices with their two hypothesis flags.

    ``hyp_weak``: ``(ac)^2 a = (db)^2 a`` and ``(ac)^2 d = (db)^2 d``.
    ``hyp_strong``: ``aca = dba`` and ``dbd = acd``.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    hyp_weak: bool
    hyp_strong: bool
    family: str = ""

    @classmethod
    def build(cls, a, b, c, d, pol: NumericPolicy = DEFAULT_POLICY, family: str = ""):
        a, b, c, d = (as_cmatrix(x) for x in (a, b, c, d))
        for x in (b, c, d):
            same_shape(a, x)
        weak, strong = _hypotheses(a, b, c, d, pol)
        if strong and not weak:
            # exact algebra forbids this; seeing it means the tolerance is miscalibrated
            raise ResidualError("strong hypotheses hold but the weak ones do not")
        return cls(a, b, c, d, weak, strong, family)


def quad_hypotheses(q: QuadInstance, pol: NumericPolicy = DEFAULT_POLICY) -> tuple[bool, bool]:
    """Re-evaluate ``(hyp_weak, hyp_strong)`` under ``pol``."""
    return _hypotheses(q.a, q.b, q.c, q.d, pol)


def _require_weak(q: QuadInstance, pol: NumericPolicy) -> None:
    if not quad_hypotheses(q, pol)[0]:
        raise PreconditionError("(ac)^2a=(db)^2a, (ac)^2d=(db)^2d")


def qnil_transfer(q: QuadInstance, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """Is ``(ac)^2`` nilpotent exactly when ``(bd)^2`` is?

    ``(db)^2`` is evaluated too; a divergence from ``(bd)^2`` is logged.
    """
    _require_weak(q, pol)
    ac = q.a @ q.c
    bd = q.b @ q.d
    db = q.d @ q.b
    left = is_nilpotent(ac @ ac, pol)
    right = is_nilpotent(bd @ bd, pol)
    other = is_nilpotent(db @ db, pol)
    if right != other:
        log.warning("(bd)^2 nilpotent=%s but (db)^2 nilpotent=%s", right, other)
    return left == right


def hirano_transfer(q: QuadInstance, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """Does ``ac`` have a Hirano inverse exactly when ``bd`` does?"""
    _require_weak(q, pol)
    return has_hirano(q.a @ q.c, pol) == has_hirano(q.b @ q.d, pol)


def truncated_shift_quad(trunc: int, pol: NumericPolicy = DEFAULT_POLICY) -> QuadInstance:
    """Finite truncation of the shift counterexample separating the two hypotheses.

    ``s`` maps coordinates ``(x1, x2, x3, ...)`` to ``(0, x1, x2, 0, ...)`` so
    ``s^3 = 0``, and in 2x2 block form ``a = d = [[0, s], [0, 0]]``,
    ``b = [[I, 0], [0, 0]]``, ``c = [[I, 0], [I, I]]``. The weak hypotheses
    hold, ``aca != dba`` and ``ac`` is nilpotent.
    """
    if isinstance(trunc, bool) or not isinstance(trunc, (int, np.integer)) or trunc < 3:
        raise ValueError(f"truncation must be an integer >= 3, got {trunc!r}")
    m = int(trunc)
    s = np.zeros((m, m), dtype=complex)
    s[1, 0] = 1
    s[2, 1] = 1
    z = np.zeros((m, m), dtype=complex)
    i = eye(m)
    a = np.block([[z, s], [z, z]])
    b = np.block([[i, z], [z, z]])
    c = np.block([[i, z], [i, i]])
    return QuadInstance.build(a, b, c, a.copy(), pol, family="shift-truncation")
