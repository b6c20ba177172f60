"""Generalized Hirano inverses and the tripotent-plus-nilpotent certificate.

For a complex matrix the inverse exists exactly when ``a - a^3`` is
nilpotent, i.e. when every eigenvalue is -1, 0 or 1. The inverse itself is
the Drazin inverse. The explicit formula ``c = (a^2 + I - e^2)^{-1} e^2``
built from the tripotent part ``e`` gives its square ``c = b^2``, the element
with ``c = (ac)^2`` and ``a^2 - a^2 c`` nilpotent; ``b = a c`` is checked as
an independent second route.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .core import (
    DEFAULT_POLICY,
    NumericPolicy,
    _freeze,
    as_cmatrix,
    commutes,
    eye,
    fro,
    is_nilpotent,
    nilpotency_ratio,
    operand_scale,
    residual,
)
from .errors import CrossCheckError, PreconditionError, ResidualError
from .spectral import drazin_inverse, gs_drazin, spectral_projector


@dataclass(frozen=True)
class HiranoCertificate:
    """Hirano inverse ``b`` of ``a`` with the split ``a = e + w``.

    ``e = f - g`` is the tripotent part, ``f`` and ``g`` the projectors onto
    the generalized eigenspaces of 1 and -1, and ``w`` the nilpotent part.
    ``c`` is the squared inverse from the explicit formula.
    """

    b: np.ndarray
    e: np.ndarray
    w: np.ndarray
    f: np.ndarray
    g: np.ndarray
    c: np.ndarray
    residuals: Mapping[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "c": self.c,
            "e": self.e,
            "w": self.w,
            "f": self.f,
            "g": self.g,
            "residuals": dict(self.residuals),
        }


def certificate_residuals(a, cert: HiranoCertificate) -> dict[str, float]:
    """Relative residual of every identity a certificate must satisfy."""
    a = np.asarray(a)
    b, e, w, f, g, c = cert.b, cert.e, cert.w, cert.f, cert.g, cert.c
    ab = a @ b
    ac = a @ c
    return {
        "b_bab": residual(b @ a @ b, b, b, a, b),
        "ab_ba": residual(ab, b @ a, a, b),
        "a2_ab_nilpotent": nilpotency_ratio(a @ a - ab),
        "e_tripotent": residual(e @ e @ e, e, e, e, e),
        "e_commutes": residual(e @ a, a @ e, e, a),
        "w_split": residual(w, a - e, a, e),
        "w_nilpotent": nilpotency_ratio(w),
        "e_f_minus_g": residual(e, f - g, f, g),
        "f_idempotent": residual(f @ f, f, f, f),
        "g_idempotent": residual(g @ g, g, g, g),
        "fg_zero": fro(f @ g) / operand_scale(f, g),
        "gf_zero": fro(g @ f) / operand_scale(g, f),
        "c_ac_squared": residual(ac @ ac, c, a, c, a, c),
        "a2_a2c_nilpotent": nilpotency_ratio(a @ a - a @ ac),
        "c_b_squared": residual(c, b @ b, b, b),
        "b_ac": residual(b, ac, a, c),
    }


def has_hirano(a, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """True iff ``a - a^3`` passes the nilpotency power test."""
    a = as_cmatrix(a)
    return is_nilpotent(a - a @ a @ a, pol)


def formula_inverse(a, e) -> np.ndarray:
    """``(a^2 + I - e^2)^{-1} e^2`` for a commuting tripotent ``e`` with ``a - e`` nilpotent.

    This is the square of the Hirano inverse, not the inverse itself.
    """
    a = np.asarray(a)
    e2 = e @ e
    return np.linalg.solve(a @ a + eye(a.shape[0]) - e2, e2)


def hirano_inverse(a, pol: NumericPolicy = DEFAULT_POLICY) -> HiranoCertificate | None:
    """Hirano inverse with its certificate, or ``None`` if none exists.

    Raises
    ------
    CrossCheckError
        If the Drazin route ``b`` and ``a c`` from the explicit formula disagree.
    ResidualError
        If a certificate identity fails at ``tol_residual``.
    """
    a = as_cmatrix(a)
    if not has_hirano(a, pol):
        return None
    f = spectral_projector(a, 1, pol)
    g = spectral_projector(a, -1, pol)
    e = f - g
    w = a - e
    b = drazin_inverse(a, pol).dinv
    try:
        c = formula_inverse(a, e)
    except np.linalg.LinAlgError as exc:
        raise CrossCheckError(f"explicit formula is singular: {exc}", b, None) from exc
    alt = a @ c
    cross = residual(b, alt, a, c)
    if cross > pol.tol_residual:
        raise CrossCheckError(
            f"Drazin route and explicit formula disagree (residual {cross:.3e})",
            b,
            alt,
            {"b_ac": cross},
        )
    cert = HiranoCertificate(b, _freeze(e), _freeze(w), f, g, _freeze(c))
    res = certificate_residuals(a, cert)
    bad = {name: v for name, v in res.items() if v > pol.tol_residual}
    if bad:
        raise ResidualError(
            "certificate identities failed: "
            + ", ".join(f"{name}={v:.3e}" for name, v in bad.items()),
            res,
        )
    return HiranoCertificate(b, cert.e, cert.w, f, g, cert.c, MappingProxyType(res))


def halves(a, pol: NumericPolicy = DEFAULT_POLICY):
    """``((a^2 + a)/2, (a^2 - a)/2, flag)``; flag is set when both halves split as idempotent plus nilpotent."""
    a = as_cmatrix(a)
    a2 = a @ a
    plus = _freeze((a2 + a) / 2)
    minus = _freeze((a2 - a) / 2)
    flag = gs_drazin(plus, pol) is not None and gs_drazin(minus, pol) is not None
    return plus, minus, flag


def power_hirano(a, m: int, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    a = as_cmatrix(a)
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"power must be a positive integer, got {m!r}")
    return has_hirano(np.linalg.matrix_power(a, int(m)), pol)


def corner_hirano(e, a, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """Hirano test of ``e a`` for an idempotent ``e`` commuting with a Hirano ``a``."""
    e = as_cmatrix(e)
    a = as_cmatrix(a)
    if e.shape != a.shape:
        raise PreconditionError("same dimension", f"shape mismatch {e.shape} vs {a.shape}")
    if residual(e @ e, e, e, e) > pol.tol_residual:
        raise PreconditionError("e^2=e")
    if not commutes(e, a, pol):
        raise PreconditionError("ea=ae")
    if not has_hirano(a, pol):
        raise PreconditionError("a has generalized Hirano inverse")
    return has_hirano(e @ a, pol)

