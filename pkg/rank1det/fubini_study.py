"""
Fubini-Study metric on an affine chart of complex projective space.

On the chart with coordinates z (s = |z|^2) the metric matrix is the
complex Hessian of log(1 + s):

    H_ij = delta_ij / (1+s) - conj(z_i) z_j / (1+s)^2

which is diag(1/(1+s)) + a b^T with a_i = -conj(z_i)/(1+s), b_i = z_i/(1+s).
The total (1+s)^2 denominator of the off-diagonal is split evenly between
a and b; only the products a_i b_j matter for H and its determinant.
det H = (1+s)^-(n+1), so the Ricci form -i dd^c log det H equals (n+1) H
(Einstein constant n+1).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from rank1det.config import CFG
from rank1det.dense import DenseMatrix
from rank1det.errors import StepSizeError
from rank1det.rank1 import Rank1System, logdet_corrected
from rank1det.scalars import Scalar, ScalarKind, coerce

logger = logging.getLogger(__name__)

__all__ = [
    "ChartPoint",
    "EinsteinReport",
    "fs_metric_matrix",
    "fs_rank1_params",
    "fs_det_closed_form",
    "fs_log_det",
    "fs_ricci_fd",
    "fs_ricci_fd_error",
    "fs_einstein_check",
]


@dataclass(frozen=True)
class ChartPoint:
    """
    z in C^n on the chart U_k; only U_0 is materialized, `chart` is metadata.
    """
    z: Tuple[Scalar, ...]
    kind: ScalarKind = ScalarKind.C64
    chart: int = 0

    def __post_init__(self) -> None:
        if not self.kind.is_complex:
            raise ValueError(f"chart points are complex, got kind {self.kind.value}")
        if len(self.z) < 1:
            raise ValueError("chart point needs n >= 1 coordinates")
        if not 0 <= self.chart <= len(self.z):
            raise ValueError(f"chart index {self.chart} outside 0..{len(self.z)}")

    @classmethod
    def of(cls, values: Sequence, *, exact: bool = False, chart: int = 0) -> "ChartPoint":
        kind = ScalarKind.QI if exact else ScalarKind.C64
        return cls(tuple(coerce(v, kind) for v in values), kind, chart)

    @classmethod
    def from_real(cls, coords: Sequence[float], *, chart: int = 0) -> "ChartPoint":
        """
        2n real coordinates (x_1..x_n, y_1..y_n) with z_i = x_i + i*y_i.
        """
        n = len(coords) // 2
        return cls(tuple(complex(coords[i], coords[n + i]) for i in range(n)), ScalarKind.C64, chart)

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def norm_sq(self):
        """
        s = |z|^2; a Fraction for exact points, float otherwise.
        """
        if self.kind.is_exact:
            return sum((v.abs_sq() for v in self.z), Fraction(0))
        return math.fsum(v.real * v.real + v.imag * v.imag for v in self.z)

    def modulus_sq(self, i: int):
        v = self.z[i]
        if self.kind.is_exact:
            return v.abs_sq()
        return v.real * v.real + v.imag * v.imag

    def real_coords(self) -> List[float]:
        zs = [complex(v) for v in self.z]
        return [v.real for v in zs] + [v.imag for v in zs]

    def as_float(self) -> "ChartPoint":
        if not self.kind.is_exact:
            return self
        return ChartPoint(tuple(complex(v) for v in self.z), ScalarKind.C64, self.chart)


@dataclass(frozen=True)
class EinsteinReport:
    point: ChartPoint
    fd_step: float
    max_abs_deviation: float
    estimated_constant: float

    @property
    def expected_constant(self) -> int:
        return self.point.n + 1

    def passed(self, tolerance: float) -> bool:
        return self.max_abs_deviation <= tolerance


def _weights(p: ChartPoint):
    s = p.norm_sq
    if p.kind.is_exact:
        w = Fraction(1) / (1 + s)
    else:
        w = 1.0 / (1.0 + s)
    return s, w


# ============================================================
# Metric and its rank-one structure
# ============================================================
def fs_metric_matrix(p: ChartPoint) -> DenseMatrix:
    """
    Hessian of log(1 + |z|^2): delta_ij/(1+s) - conj(z_i) z_j/(1+s)^2.
    """
    _, w = _weights(p)
    w2 = w * w
    n = p.n
    z = p.z
    diag = coerce(w, p.kind)
    off = coerce(0, p.kind)
    entries = tuple(
        (diag if i == j else off) - (z[i].conjugate() * z[j]) * w2
        for i in range(n)
        for j in range(n)
    )
    return DenseMatrix(n, entries, p.kind)


def fs_rank1_params(p: ChartPoint) -> Rank1System:
    """
    x_i = (1+s-|z_i|^2)/(1+s)^2, a_i = -conj(z_i)/(1+s), b_i = z_i/(1+s).
    """
    s, w = _weights(p)
    w2 = w * w
    x = tuple(coerce((1 + s - p.modulus_sq(i)) * w2, p.kind) for i in range(p.n))
    a = tuple(-(v.conjugate() * w) for v in p.z)
    b = tuple(v * w for v in p.z)
    return Rank1System(x, a, b, p.kind)


def fs_det_closed_form(p: ChartPoint):
    """
    (1+s)^-(n+1); exact Fraction for exact points.
    """
    s = p.norm_sq
    if p.kind.is_exact:
        return Fraction(1) / (1 + s) ** (p.n + 1)
    return (1.0 + s) ** (-(p.n + 1))


def fs_log_det(p: ChartPoint) -> float:
    """
    log det H through the O(n) rank-one log-determinant.

    det depends on a, b only via a_k b_k = -|z_k|^2/(1+s)^2, so the real
    system with a_k = -|z_k|/(1+s), b_k = |z_k|/(1+s) has the same value.
    """
    q = p.as_float()
    s, w = _weights(q)
    w2 = w * w
    mods = [math.sqrt(q.modulus_sq(i)) for i in range(q.n)]
    system = Rank1System(
        tuple((1.0 + s - m * m) * w2 for m in mods),
        tuple(-m * w for m in mods),
        tuple(m * w for m in mods),
        ScalarKind.F64,
    )
    sign, log_abs = logdet_corrected(system)
    if sign != 1:
        logger.warning("fs_log_det: non-positive determinant sign=%d at n=%d", sign, q.n)
    return log_abs


# ============================================================
# Ricci form by finite differences
# ============================================================
def _real_hessian(f, v: List[float], h: float) -> List[List[float]]:
    """
    Central differences in fixed index order:
    pure   (f(+h) - 2 f(0) + f(-h)) / h^2
    mixed  (f(+,+) - f(+,-) - f(-,+) + f(-,-)) / (4 h^2)
    """
    m = len(v)
    f0 = f(v)

    def shifted(*moves: Tuple[int, float]) -> float:
        u = list(v)
        for idx, step in moves:
            u[idx] += step
        return f(u)

    hess = [[0.0] * m for _ in range(m)]
    for p in range(m):
        hess[p][p] = (shifted((p, h)) - 2.0 * f0 + shifted((p, -h))) / (h * h)
    for p in range(m):
        for q in range(p + 1, m):
            val = (
                shifted((p, h), (q, h))
                - shifted((p, h), (q, -h))
                - shifted((p, -h), (q, h))
                + shifted((p, -h), (q, -h))
            ) / (4.0 * h * h)
            hess[p][q] = hess[q][p] = val
    return hess


def fs_ricci_fd(p: ChartPoint, h: Optional[float] = None) -> DenseMatrix:
    """
    R_ij = -d^2/(dz_i dconj(z_j)) log det H, with the Wirtinger identity
    d^2 f/(dz_i dconj(z_j)) = 1/4 (f_xixj + f_yiyj) + i/4 (f_xiyj - f_yixj).
    """
    h = CFG.FD_STEP if h is None else float(h)
    if not h > 0:
        raise StepSizeError(h)
    q = p.as_float()
    n = q.n
    chart = q.chart

    def f(coords: List[float]) -> float:
        return fs_log_det(ChartPoint.from_real(coords, chart=chart))

    F = _real_hessian(f, q.real_coords(), h)
    entries = tuple(
        -complex(
            0.25 * (F[i][j] + F[n + i][n + j]),
            0.25 * (F[i][n + j] - F[n + i][j]),
        )
        for i in range(n)
        for j in range(n)
    )
    return DenseMatrix(n, entries, ScalarKind.C64)


def _deviation(R: DenseMatrix, H: DenseMatrix, c: float) -> float:
    return max((abs(r - c * hv) for r, hv in zip(R.entries, H.entries)), default=0.0)


def fs_ricci_fd_error(p: ChartPoint, h: Optional[float] = None) -> float:
    """
    max_ij |R_ij - (n+1) H_ij|
    """
    R = fs_ricci_fd(p, h)
    H = fs_metric_matrix(p.as_float())
    return _deviation(R, H, float(p.n + 1))


def fs_einstein_check(p: ChartPoint, h: Optional[float] = None) -> EinsteinReport:
    h = CFG.FD_STEP if h is None else float(h)
    R = fs_ricci_fd(p, h)
    H = fs_metric_matrix(p.as_float())
    num = math.fsum((hv.conjugate() * r).real for hv, r in zip(H.entries, R.entries))
    den = math.fsum(abs(hv) ** 2 for hv in H.entries)
    report = EinsteinReport(
        point=p,
        fd_step=h,
        max_abs_deviation=_deviation(R, H, float(p.n + 1)),
        estimated_constant=num / den,
    )
    logger.debug(
        "einstein check n=%d h=%g deviation=%.3e constant=%.12g",
        p.n, h, report.max_abs_deviation, report.estimated_constant,
    )
    return report
