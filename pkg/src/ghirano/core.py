"""Dense complex-matrix kernel shared by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
:func:`as_cmatrix` validates an input (square, non-empty, finite) and
returns a read-only copy; every operation here is pure.

Residual decisions are relative. An identity ``lhs = rhs`` built from the
factors ``x1 ... xk`` is accepted when

    ||lhs - rhs||_F <= tol_residual * prod(1 + ||xi||_F)

which is the scale :func:`commutes` uses for ``ab = ba``.
"""

from __future__ import annotations

import enum
import logging
import math
import numbers
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DimensionError, EigenSolverError

log = logging.getLogger(__name__)

# The commutant lives in n^2-dimensional coefficient space; an n^2 x n^2 SVD
# past this size is no longer desk scale.
COMM2_MAX_DIM = 32


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerance bundle for rank, spectral clustering and residual decisions.

    ``tol_rank`` is relative to the largest singular value, ``tol_spec`` is
    an absolute distance in the complex plane and ``tol_residual`` is
    relative to the operand scale described in the module docstring.
    """

    tol_rank: float = 1e-10
    tol_spec: float = 1e-6
    tol_residual: float = 1e-8
    max_dim: int = 64

    def __post_init__(self):
        for name in ("tol_rank", "tol_spec", "tol_residual"):
            value = getattr(self, name)
            if (
                isinstance(value, bool)
                or not isinstance(value, numbers.Real)
                or not math.isfinite(value)
                or value <= 0
            ):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if self.tol_rank > self.tol_spec:
            raise ValueError(
                f"tol_rank ({self.tol_rank}) must not exceed tol_spec ({self.tol_spec})"
            )
        if (
            isinstance(self.max_dim, bool)
            or not isinstance(self.max_dim, numbers.Integral)
            or self.max_dim < 1
        ):
            raise ValueError(f"max_dim must be a positive integer, got {self.max_dim!r}")

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_POLICY = NumericPolicy()


def _freeze(x: np.ndarray) -> np.ndarray:
    x.flags.writeable = False
    return x


def as_block(x) -> np.ndarray:
    """Validate a (possibly rectangular) finite complex 2-D array."""
    arr = np.array(x, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D array, got {arr.ndim} dimension(s)")
    if arr.size == 0:
        raise DimensionError("empty matrices are not supported")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return _freeze(arr)


def as_cmatrix(x) -> np.ndarray:
    """Validate and return a read-only square complex matrix."""
    arr = as_block(x)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def check_dim(a: np.ndarray, pol: NumericPolicy) -> None:
    if a.shape[0] > pol.max_dim:
        raise DimensionError(f"dimension {a.shape[0]} exceeds max_dim={pol.max_dim}")


def same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def fro(x) -> float:
    return float(np.linalg.norm(x))


def operand_scale(*factors) -> float:
    return math.prod(1.0 + fro(f) for f in factors)


def residual(lhs, rhs, *factors) -> float:
    """Relative residual of ``lhs = rhs``.

    With no factors the scale is ``1 + max(||lhs||, ||rhs||)``.
    """
    if factors:
        scale = operand_scale(*factors)
    else:
        scale = 1.0 + max(fro(lhs), fro(rhs))
    return fro(np.asarray(lhs) - np.asarray(rhs)) / scale


def approx_equal(lhs, rhs, pol: NumericPolicy = DEFAULT_POLICY, *factors) -> bool:
    return residual(lhs, rhs, *factors) <= pol.tol_residual


def truncated_pinv(x: np.ndarray, r: int) -> np.ndarray:
    """Pseudoinverse keeping exactly the ``r`` largest singular values."""
    if r <= 0:
        return np.zeros((x.shape[1], x.shape[0]), dtype=complex)
    u, s, vh = np.linalg.svd(x)
    return (vh[:r].conj().T / s[:r]) @ u[:, :r].conj().T


def rank(a, pol: NumericPolicy = DEFAULT_POLICY) -> int:
    """Number of singular values above ``tol_rank`` times the largest one."""
    a = as_cmatrix(a)
    check_dim(a, pol)
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > pol.tol_rank * s[0]))


def pinv(a, pol: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Moore-Penrose pseudoinverse under the ``tol_rank`` cutoff."""
    a = as_cmatrix(a)
    check_dim(a, pol)
    return _freeze(truncated_pinv(a, rank(a, pol)))


def _eig_key(z: complex):
    return (-abs(z), -z.real, -z.imag)


def eigenvalues(a) -> np.ndarray:
    """Eigenvalues with multiplicity, by descending modulus, then real, then imaginary part."""
    a = as_cmatrix(a)
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigensolver did not converge: {exc}") from exc
    return _freeze(np.array(sorted(vals.astype(complex), key=_eig_key), dtype=complex))


def commutes(a, b, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    same_shape(a, b)
    return fro(a @ b - b @ a) <= pol.tol_residual * operand_scale(a, b)


def commutant_basis(a, pol: NumericPolicy = DEFAULT_POLICY) -> list[np.ndarray]:
    """Orthonormal (Frobenius) basis of ``{x : xa = ax}``.

    The basis is the numerical nullspace of ``x -> xa - ax`` on the
    row-major coefficient vector of ``x``.
    """
    a = as_cmatrix(a)
    n = a.shape[0]
    if n > min(pol.max_dim, COMM2_MAX_DIM):
        raise DimensionError(
            f"commutant of a {n}x{n} matrix needs an {n * n}-dimensional nullspace; "
            f"limit is n <= {min(pol.max_dim, COMM2_MAX_DIM)}"
        )
    i = np.eye(n)
    op = np.kron(i, a.T) - np.kron(a, i)
    _, s, vh = np.linalg.svd(op)
    if s[0] == 0:
        null = vh
    else:
        null = vh[s <= pol.tol_rank * s[0]]
    return [v.conj().reshape(n, n) for v in null]


def in_comm2(a, b, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    """Does ``b`` commute with everything that commutes with ``a``?"""
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    same_shape(a, b)
    return all(commutes(b, x, pol) for x in commutant_basis(a, pol))


def nilpotency_ratio(x) -> float:
    """Power-test statistic: ``||x^n||`` over its first-order roundoff scale.

    For an exactly nilpotent ``x`` perturbed by ``d``, ``(x + d)^n`` is
    ``sum_i x^i d x^(n-1-i)`` to first order, so ``||x^n||_F`` is compared
    with ``(1 + ||x||_F) * sum_i m_i m_(n-1-i)`` where ``m_0 = 1`` and
    ``m_i = ||x^i||_F``. This never exceeds ``n (1 + ||x||_F)^n``.
    """
    x = np.asarray(x, dtype=complex)
    n = x.shape[0]
    norms = [1.0]
    p = np.eye(n, dtype=complex)
    for _ in range(n):
        p = p @ x
        norms.append(fro(p))
    top = norms[n]
    if top == 0:
        return 0.0
    scale = (1.0 + norms[1]) * sum(norms[i] * norms[n - 1 - i] for i in range(n))
    return top / scale


@dataclass(frozen=True)
class NilpotencyReport:
    """Outcome of the power test, with the spectral test alongside."""

    nilpotent: bool
    ratio: float
    spectral_nilpotent: bool | None
    warning: str | None = None


def nilpotency(a, pol: NumericPolicy = DEFAULT_POLICY) -> NilpotencyReport:
    """Decide nilpotency by the power test; report the spectral test too.

    The two can disagree on badly conditioned or large Jordan blocks, whose
    eigenvalues scatter like ``eps^(1/k)``; that is reported as a warning and
    the power test wins.
    """
    a = as_cmatrix(a)
    ratio = nilpotency_ratio(a)
    verdict = ratio <= pol.tol_residual
    warning = None
    try:
        spectral = bool(np.all(np.abs(eigenvalues(a)) <= pol.tol_spec))
    except EigenSolverError as exc:
        spectral = None
        warning = f"spectral test unavailable: {exc}"
    if spectral is not None and spectral != verdict:
        warning = (
            f"power test says nilpotent={verdict} (ratio {ratio:.3e}) but "
            f"spectral test says nilpotent={spectral}"
        )
    if warning:
        log.debug(warning)
    return NilpotencyReport(verdict, ratio, spectral, warning)


def is_nilpotent(a, pol: NumericPolicy = DEFAULT_POLICY) -> bool:
    return nilpotency(a, pol).nilpotent


class Cluster(str, enum.Enum):
    MINUS_ONE = "MinusOne"
    ZERO = "Zero"
    ONE = "One"
    OTHER = "Other"


CENTERS = {Cluster.MINUS_ONE: -1.0, Cluster.ZERO: 0.0, Cluster.ONE: 1.0}


def label_eigenvalue(lam: complex, pol: NumericPolicy = DEFAULT_POLICY) -> Cluster:
    best = min(CENTERS, key=lambda c: abs(lam - CENTERS[c]))
    if abs(lam - CENTERS[best]) <= pol.tol_spec:
        return best
    return Cluster.OTHER


@dataclass(frozen=True)
class ClassReport:
    eigenvalues: tuple[complex, ...]
    cluster: tuple[Cluster, ...]

    @property
    def is_qnil(self) -> bool:
        return all(c is Cluster.ZERO for c in self.cluster)

    @property
    def is_gs_drazin(self) -> bool:
        return all(c in (Cluster.ZERO, Cluster.ONE) for c in self.cluster)

    @property
    def is_hirano(self) -> bool:
        return all(c is not Cluster.OTHER for c in self.cluster)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "cluster": [c.value for c in self.cluster],
            "is_qnil": self.is_qnil,
            "is_gs_drazin": self.is_gs_drazin,
            "is_hirano": self.is_hirano,
        }


def classify(a, pol: NumericPolicy = DEFAULT_POLICY) -> ClassReport:
    """Label each eigenvalue by the nearest of -1, 0, 1 within ``tol_spec``."""
    vals = eigenvalues(a)
    return ClassReport(
        tuple(complex(z) for z in vals), tuple(label_eigenvalue(z, pol) for z in vals)
    )
