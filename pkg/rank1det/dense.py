from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from rank1det.config import CFG
from rank1det.errors import DimensionLimitError, ScalarKindError
from rank1det.scalars import Scalar, ScalarKind, coerce, convert, one, zero

logger = logging.getLogger(__name__)

__all__ = [
    "DenseMatrix",
    "LOGDET_SINGULAR",
    "det_dense",
    "det_dense_exact",
    "det_dense_float",
    "logdet_dense_float",
    "det_cofactor",
]

# log_abs reported alongside sign 0 (singular); finite by contract
LOGDET_SINGULAR = 0.0


@dataclass(frozen=True)
class DenseMatrix:
    """
    Row-major n x n grid of scalars of one kind.
    """
    n: int
    entries: Tuple[Scalar, ...]
    kind: ScalarKind

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"dimension must be >= 0, got {self.n}")
        if len(self.entries) != self.n * self.n:
            raise ValueError(f"expected {self.n * self.n} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], kind: ScalarKind) -> "DenseMatrix":
        n = len(rows)
        flat: List[Scalar] = []
        for r in rows:
            if len(r) != n:
                raise ValueError(f"row of length {len(r)} in a {n}x{n} matrix")
            flat.extend(coerce(v, kind) for v in r)
        return cls(n, tuple(flat), kind)

    @classmethod
    def identity(cls, n: int, kind: ScalarKind) -> "DenseMatrix":
        o, z = one(kind), zero(kind)
        return cls(n, tuple(o if i == j else z for i in range(n) for j in range(n)), kind)

    @classmethod
    def from_array(cls, arr: np.ndarray, kind: ScalarKind) -> "DenseMatrix":
        n = int(arr.shape[0])
        return cls(n, tuple(arr.reshape(-1).tolist()), kind)

    def entry(self, i: int, j: int) -> Scalar:
        return self.entries[i * self.n + j]

    def rows(self) -> List[List[Scalar]]:
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def transpose(self) -> "DenseMatrix":
        n = self.n
        return DenseMatrix(n, tuple(self.entries[j * n + i] for i in range(n) for j in range(n)), self.kind)

    def swap_rows(self, i: int, j: int) -> "DenseMatrix":
        rows = self.rows()
        rows[i], rows[j] = rows[j], rows[i]
        return DenseMatrix(self.n, tuple(v for r in rows for v in r), self.kind)

    def leading_minor(self, k: int) -> "DenseMatrix":
        return DenseMatrix(k, tuple(self.entry(i, j) for i in range(k) for j in range(k)), self.kind)

    def converted(self, kind: ScalarKind) -> "DenseMatrix":
        if kind is self.kind:
            return self
        return DenseMatrix(self.n, tuple(convert(v, kind) for v in self.entries), kind)

    def to_array(self) -> np.ndarray:
        if self.kind.is_exact:
            raise ScalarKindError(f"to_array needs a float kind, got {self.kind.value}")
        dtype = np.complex128 if self.kind.is_complex else np.float64
        return np.array(self.entries, dtype=dtype).reshape(self.n, self.n)


# ============================================================
# Exact path: fraction-free Bareiss
# ============================================================
def _bareiss(rows: List[List], divide: Callable) -> Optional[object]:
    """
    In-place Bareiss elimination; returns the determinant or None when singular.
    Every division is exact: intermediate entries are minors of the input.
    """
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return None
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pivot = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            rik = ri[k]
            for j in range(k + 1, n):
                ri[j] = divide(ri[j] * pivot - rik * rk[j], prev)
        prev = pivot
    last = rows[n - 1][n - 1]
    return last if sign > 0 else -last


def _det_rational(m: DenseMatrix) -> Fraction:
    # scale each row to integers, eliminate over Z, undo the scaling
    rows: List[List[int]] = []
    scale = 1
    for r in m.rows():
        lcm = math.lcm(*(v.denominator for v in r))
        rows.append([v.numerator * (lcm // v.denominator) for v in r])
        scale *= lcm
    det = _bareiss(rows, lambda num, den: num // den)
    if det is None:
        return Fraction(0)
    return Fraction(det, scale)


def det_dense_exact(m: DenseMatrix) -> Scalar:
    """
    Exact determinant of a q or qi matrix; n = 0 gives 1.
    """
    if not m.kind.is_exact:
        raise ScalarKindError(f"det_dense_exact needs an exact kind, got {m.kind.value}")
    if m.n == 0:
        return one(m.kind)
    if m.kind is ScalarKind.Q:
        return _det_rational(m)
    det = _bareiss(m.rows(), lambda num, den: num / den)
    return zero(m.kind) if det is None else coerce(det, m.kind)


# ============================================================
# Float path: row-pivoted triangular factorization
# ============================================================
def _pivoted_diagonal(m: DenseMatrix, zero_rel: float) -> Tuple[int, Optional[np.ndarray]]:
    """
    Returns (row-swap sign, diagonal of U), or (0, None) when a pivot column
    is numerically zero.
    """
    a = m.to_array().copy()
    n = m.n
    tol = zero_rel * float(np.abs(a).max()) if n else 0.0
    sign = 1
    for k in range(n):
        col = np.abs(a[k:, k])
        p = int(np.argmax(col))
        if col[p] <= tol:
            return 0, None
        if p:
            a[[k, k + p]] = a[[k + p, k]]
            sign = -sign
        if k + 1 < n:
            factors = a[k + 1:, k] / a[k, k]
            a[k + 1:, k + 1:] -= np.outer(factors, a[k, k + 1:])
    return sign, np.diagonal(a).copy()


def _require_float(m: DenseMatrix, what: str) -> None:
    if m.kind.is_exact:
        raise ScalarKindError(f"{what} needs a float kind, got {m.kind.value}")


def det_dense_float(m: DenseMatrix, *, zero_rel: Optional[float] = None) -> Scalar:
    _require_float(m, "det_dense_float")
    zero_rel = CFG.ZERO_PIVOT_REL if zero_rel is None else float(zero_rel)
    if m.n == 0:
        return one(m.kind)
    sign, diag = _pivoted_diagonal(m, zero_rel)
    if diag is None:
        return zero(m.kind)
    return coerce(sign * np.prod(diag).item(), m.kind)


def logdet_dense_float(m: DenseMatrix, *, zero_rel: Optional[float] = None) -> Tuple[int, float]:
    """
    (sign, log|det|) of a real float matrix. Singular input gives
    (0, LOGDET_SINGULAR).
    """
    _require_float(m, "logdet_dense_float")
    if m.kind.is_complex:
        raise ScalarKindError("logdet_dense_float needs a real kind, got c64")
    zero_rel = CFG.ZERO_PIVOT_REL if zero_rel is None else float(zero_rel)
    if m.n == 0:
        return 1, 0.0
    sign, diag = _pivoted_diagonal(m, zero_rel)
    if diag is None:
        return 0, LOGDET_SINGULAR
    negatives = int(np.count_nonzero(diag < 0))
    if negatives % 2:
        sign = -sign
    return sign, math.fsum(np.log(np.abs(diag)).tolist())


def det_dense(m: DenseMatrix) -> Scalar:
    if m.kind.is_exact:
        return det_dense_exact(m)
    return det_dense_float(m)


# ============================================================
# Second oracle: cofactor expansion
# ============================================================
def _laplace(rows: List[List], o: Scalar, z: Scalar) -> Scalar:
    n = len(rows)
    if n == 0:
        return o
    if n == 1:
        return rows[0][0]
    total = z
    for j, v in enumerate(rows[0]):
        if v == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = v * _laplace(minor, o, z)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_cofactor(m: DenseMatrix, *, max_n: Optional[int] = None) -> Scalar:
    """
    Recursive Laplace expansion along the first row; O(n!) so capped.
    """
    limit = CFG.COFACTOR_MAX_N if max_n is None else int(max_n)
    if m.n > limit:
        raise DimensionLimitError("det_cofactor", m.n, limit)
    return coerce(_laplace(m.rows(), one(m.kind), zero(m.kind)), m.kind)
