"""JSON matrix files: ``{"n": n, "data": [[re, im], ...]}`` in row-major order.

Rectangular blocks use ``"rows"`` and ``"cols"`` in place of ``"n"``.
"""

from __future__ import annotations

import json
import math
from numbers import Real
from pathlib import Path

import numpy as np

from .errors import HiranoError


class MatrixFileError(HiranoError, ValueError):
    """Malformed matrix document; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


def _count(doc: dict, key: str) -> int:
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise MatrixFileError(key, f"expected a positive integer, got {v!r}")
    return v


def _number(x, field: str) -> float:
    if isinstance(x, bool) or not isinstance(x, Real):
        raise MatrixFileError(field, f"expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise MatrixFileError(field, "must be finite")
    return x


def from_document(doc) -> np.ndarray:
    if not isinstance(doc, dict):
        raise MatrixFileError("<root>", "expected an object with fields n and data")
    if "rows" in doc or "cols" in doc:
        for key in ("rows", "cols"):
            if key not in doc:
                raise MatrixFileError(key, "missing (rows and cols go together)")
        rows, cols = _count(doc, "rows"), _count(doc, "cols")
        if "n" in doc and (_count(doc, "n") != rows or rows != cols):
            raise MatrixFileError("n", "conflicts with rows/cols")
    elif "n" in doc:
        rows = cols = _count(doc, "n")
    else:
        raise MatrixFileError("n", "missing")
    if "data" not in doc:
        raise MatrixFileError("data", "missing")
    data = doc["data"]
    if not isinstance(data, list):
        raise MatrixFileError("data", "expected a list of [re, im] pairs")
    if len(data) != rows * cols:
        raise MatrixFileError("data", f"expected {rows * cols} entries, got {len(data)}")
    out = np.empty(rows * cols, dtype=complex)
    for i, z in enumerate(data):
        field = f"data[{i}]"
        if not isinstance(z, list) or len(z) != 2:
            raise MatrixFileError(field, f"expected an [re, im] pair, got {z!r}")
        out[i] = complex(_number(z[0], field + "[0]"), _number(z[1], field + "[1]"))
    return out.reshape(rows, cols)


def to_document(a) -> dict:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise MatrixFileError("<matrix>", f"expected a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise MatrixFileError("<matrix>", "entries must be finite")
    rows, cols = a.shape
    doc: dict = {"n": rows} if rows == cols else {"rows": rows, "cols": cols}
    doc["data"] = [[float(z.real), float(z.imag)] for z in a.ravel()]
    return doc


def read_matrix(path: str | Path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixFileError(str(path), f"cannot read: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(str(path), f"invalid JSON: {exc}") from exc
    try:
        return from_document(doc)
    except MatrixFileError as exc:
        raise MatrixFileError(f"{path}: {exc.field}", exc.message) from exc


def write_matrix(path: str | Path, a) -> None:
    Path(path).write_text(json.dumps(to_document(a)) + "\n")
