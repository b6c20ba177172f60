"""Drazin inverse, spectral idempotent and eigenvalue-cluster projectors."""

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
    check_dim,
    commutes,
    eigenvalues,
    eye,
    is_nilpotent,
    nilpotency_ratio,
    residual,
    truncated_pinv,
)
from .errors import ClusterOverlapError, ResidualError


@dataclass(frozen=True)
class DrazinData:
    """Drazin inverse ``dinv`` of a matrix with its index and spectral idempotent.

    ``residuals`` holds the relative residuals of ``dinv a dinv = dinv``,
    ``a dinv = dinv a``, the power-test ratio of ``a - a^2 dinv`` and the
    idempotency of ``spec_idem``.
    """

    index: int
    dinv: np.ndarray
    spec_idem: np.ndarray
    core_rank: int
    residuals: Mapping[str, float] = field(default_factory=dict)


def kernel_chain(
    a, pol: NumericPolicy = DEFAULT_POLICY, ref_norm: float | None = None
) -> list[int]:
    """Nullities ``dim ker(a^k) - dim ker(a^(k-1))`` for ``k = 1, 2, ...`` until zero.

    Computed by unitary staircase deflation: the kernel of the trailing block
    is rotated to the front and the rest is deflated again. Every rank
    decision uses the cutoff ``tol_rank * ||a||_2``, so roundoff left behind
    by an exhausted nilpotent block is never mistaken for rank. ``ref_norm``
    raises the reference scale, for ``a`` that is a difference of larger
    matrices (a shift ``x - c I`` must be ranked at the scale of ``x``).
    """
    a = as_cmatrix(a)
    check_dim(a, pol)
    n = a.shape[0]
    smax = np.linalg.norm(a, 2)
    cutoff = pol.tol_rank * max(smax, ref_norm or 0.0)
    if smax <= cutoff:
        return [n]
    t = np.array(a)
    chain = []
    off = 0
    while off < n:
        _, s, vh = np.linalg.svd(t[off:, off:])
        nullity = int(np.count_nonzero(s <= cutoff))
        if nullity == 0:
            break
        chain.append(nullity)
        # null vectors first; the reversed right singular basis is still unitary
        w = vh.conj().T[:, ::-1]
        t[:, off:] = t[:, off:] @ w
        t[off:, :] = w.conj().T @ t[off:, :]
        off += nullity
    return chain


def drazin_index(a, pol: NumericPolicy = DEFAULT_POLICY) -> int:
    """Smallest ``k`` with ``rank(a^k) = rank(a^(k+1))``; 0 for invertible ``a``."""
    return len(kernel_chain(a, pol))


def drazin_inverse(
    a, pol: NumericPolicy = DEFAULT_POLICY, ref_norm: float | None = None
) -> DrazinData:
    """Drazin inverse ``a^k (a^(2k+1))^+ a^k`` with ``k`` the index.

    The pseudoinverse is truncated to the core rank ``n - dim ker(a^k)``.
    ``ref_norm`` is passed on to :func:`kernel_chain`.

    Raises
    ------
    ResidualError
        If one of the defining identities fails at ``tol_residual``.
    """
    a = as_cmatrix(a)
    chain = kernel_chain(a, pol, ref_norm)
    n = a.shape[0]
    k = len(chain)
    r = n - sum(chain)
    ak = np.linalg.matrix_power(a, k)
    dinv = ak @ truncated_pinv(np.linalg.matrix_power(a, 2 * k + 1), r) @ ak
    p = eye(n) - a @ dinv
    res = {
        "dinv_a_dinv": residual(dinv @ a @ dinv, dinv, dinv, a, dinv),
        "commute": residual(a @ dinv, dinv @ a, a, dinv),
        "core_nilpotent": nilpotency_ratio(a - a @ a @ dinv),
        "spec_idem_idempotent": residual(p @ p, p, p, p),
    }
    bad = {name: v for name, v in res.items() if v > pol.tol_residual}
    if bad:
        raise ResidualError(
            "Drazin inverse failed its defining identities: "
            + ", ".join(f"{name}={v:.3e}" for name, v in bad.items()),
            res,
        )
    return DrazinData(k, _freeze(dinv), _freeze(p), r, MappingProxyType(res))


def spectral_projector(a, center: complex, pol: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Projector onto the generalized eigenspaces clustering at ``center``.

    ``center`` is one of -1, 0, 1. The projector is the spectral idempotent
    of ``a - center*I``.
    """
    a = as_cmatrix(a)
    if center not in (-1, 0, 1):
        raise ValueError(f"center must be -1, 0 or 1, got {center!r}")
    for lam in eigenvalues(a):
        near = [c for c in (-1, 0, 1) if abs(lam - c) <= pol.tol_spec]
        if len(near) > 1:
            raise ClusterOverlapError(
                f"eigenvalue {lam} is within tol_spec={pol.tol_spec} of centers {near}"
            )
    n = a.shape[0]
    ref = np.linalg.norm(a, 2) + abs(center)
    proj = drazin_inverse(a - center * eye(n), pol, ref_norm=ref).spec_idem
    if not commutes(proj, a, pol):
        raise ResidualError(
            f"projector at {center} does not commute with a",
            {"commute": residual(proj @ a, a @ proj, proj, a)},
        )
    return proj


def gs_drazin(a, pol: NumericPolicy = DEFAULT_POLICY):
    """Split ``a = e + w`` with ``e`` the eigenvalue-1 projector and ``w`` nilpotent.

    Returns ``None`` when ``a - a^2`` is not nilpotent, otherwise ``(e, w)``.
    """
    a = as_cmatrix(a)
    if not is_nilpotent(a - a @ a, pol):
        return None
    e = spectral_projector(a, 1, pol)
    w = a - e
    if not is_nilpotent(w, pol):
        raise ResidualError(
            "a - a^2 is nilpotent but a - e is not", {"w_nilpotent": nilpotency_ratio(w)}
        )
    return e, _freeze(w)
