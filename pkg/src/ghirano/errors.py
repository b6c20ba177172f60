"""Exception hierarchy for the library."""

from __future__ import annotations


class HiranoError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(HiranoError, ValueError):
    """Shape mismatch, empty matrix, or the policy's dimension guard exceeded."""


class EigenSolverError(HiranoError, RuntimeError):
    """The dense eigensolver failed to converge."""


class ClusterOverlapError(HiranoError, ValueError):
    """An eigenvalue lies within ``tol_spec`` of two cluster centers."""


class ResidualError(HiranoError, ArithmeticError):
    """A computed object failed one of its defining identities.

    ``residuals`` maps identity names to their relative residuals.
    """

    def __init__(self, message: str, residuals: dict[str, float] | None = None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class CrossCheckError(ResidualError):
    """Two independent routes to the same inverse disagree."""

    def __init__(self, message, primary, alternate, residuals=None):
        super().__init__(message, residuals)
        self.primary = primary
        self.alternate = alternate


class PreconditionError(HiranoError, ValueError):
    """A hypothesis required by an operation does not hold.

    ``condition`` names the first failed condition, written the way the
    identity reads (e.g. ``"BC=CB=0"``).
    """

    def __init__(self, condition: str, message: str | None = None):
        super().__init__(message or f"precondition failed: {condition}")
        self.condition = condition
