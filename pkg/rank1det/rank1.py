from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterator, Optional, Sequence, Tuple

from rank1det.config import CFG
from rank1det.dense import LOGDET_SINGULAR, DenseMatrix, det_dense
from rank1det.errors import DimensionLimitError, FactorDivisionError, ScalarKindError
from rank1det.scalars import (
    Scalar,
    ScalarKind,
    coerce,
    convert,
    magnitude,
    one,
    scalar_prod,
    scalar_sum,
    zero,
)

logger = logging.getLogger(__name__)

__all__ = [
    "Rank1System",
    "ExpansionSubset",
    "EvalPath",
    "Evaluation",
    "to_dense",
    "evaluate_corrected",
    "det_corrected",
    "det_division_free",
    "det_erroneous",
    "expansion_term",
    "det_by_expansion",
    "logdet_corrected",
]


@dataclass(frozen=True)
class Rank1System:
    """
    The matrix with x_i on the diagonal and a_i*b_j off it, i.e.
    diag(x - a*b) + a b^T.
    """
    x: Tuple[Scalar, ...]
    a: Tuple[Scalar, ...]
    b: Tuple[Scalar, ...]
    kind: ScalarKind

    def __post_init__(self) -> None:
        if not (len(self.x) == len(self.a) == len(self.b)):
            raise ValueError(
                f"x, a, b must share one length, got {len(self.x)}, {len(self.a)}, {len(self.b)}"
            )

    @classmethod
    def from_values(cls, x: Sequence, a: Sequence, b: Sequence, kind: ScalarKind) -> "Rank1System":
        return cls(
            tuple(coerce(v, kind) for v in x),
            tuple(coerce(v, kind) for v in a),
            tuple(coerce(v, kind) for v in b),
            kind,
        )

    @property
    def n(self) -> int:
        return len(self.x)

    def products(self) -> Tuple[Scalar, ...]:
        return tuple(ak * bk for ak, bk in zip(self.a, self.b))

    def factors(self) -> Tuple[Scalar, ...]:
        """
        d_k = x_k - a_k b_k
        """
        return tuple(xk - ak * bk for xk, ak, bk in zip(self.x, self.a, self.b))

    def permuted(self, perm: Sequence[int]) -> "Rank1System":
        return Rank1System(
            tuple(self.x[p] for p in perm),
            tuple(self.a[p] for p in perm),
            tuple(self.b[p] for p in perm),
            self.kind,
        )

    def gauged(self, c: Scalar) -> "Rank1System":
        """
        (a, b) -> (c*a, b/c); leaves every product a_i b_j unchanged.
        """
        c = coerce(c, self.kind)
        return Rank1System(self.x, tuple(c * v for v in self.a), tuple(v / c for v in self.b), self.kind)

    def converted(self, kind: ScalarKind) -> "Rank1System":
        if kind is self.kind:
            return self
        return Rank1System(
            tuple(convert(v, kind) for v in self.x),
            tuple(convert(v, kind) for v in self.a),
            tuple(convert(v, kind) for v in self.b),
            kind,
        )


@dataclass(frozen=True)
class ExpansionSubset:
    """
    1-based column indices that take the rank-one part b_k*a.
    """
    members: FrozenSet[int] = field(default_factory=frozenset)

    @classmethod
    def of(cls, *indices: int) -> "ExpansionSubset":
        return cls(frozenset(int(i) for i in indices))

    @property
    def size(self) -> int:
        return len(self.members)

    def validate(self, n: int) -> None:
        bad = sorted(i for i in self.members if not 1 <= i <= n)
        if bad:
            raise ValueError(f"expansion subset indices {bad} outside 1..{n}")


class EvalPath(str, Enum):
    DIVIDED = "divided"
    DIVISION_FREE = "division_free"
    FALLBACK = "fallback"


@dataclass(frozen=True)
class Evaluation:
    value: Scalar
    path: EvalPath
    min_factor: Optional[float] = None


# ============================================================
# Dense realization
# ============================================================
def to_dense(s: Rank1System) -> DenseMatrix:
    n = s.n
    entries = tuple(
        s.x[i] if i == j else s.a[i] * s.b[j]
        for i in range(n)
        for j in range(n)
    )
    return DenseMatrix(n, entries, s.kind)


# ============================================================
# Formulas
# ============================================================
def _needs_fallback(d: Sequence[Scalar], kind: ScalarKind, rel: float) -> Tuple[bool, Optional[float]]:
    if not d:
        return False, None
    if kind.is_exact:
        # no float conversion: exact entries may exceed the float range
        return any(dk == 0 for dk in d), None
    mags = [magnitude(dk) for dk in d]
    lo = min(mags)
    return lo < rel * max(1.0, max(mags)), lo


def _division_free(d: Sequence[Scalar], ab: Sequence[Scalar], kind: ScalarKind) -> Scalar:
    # prod_{l != k} d_l from prefix/suffix products, O(n) total
    n = len(d)
    o = one(kind)
    prefix = [o] * (n + 1)
    for k in range(n):
        prefix[k + 1] = prefix[k] * d[k]
    suffix = [o] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = suffix[k + 1] * d[k]
    terms = [prefix[n]]
    terms.extend(ab[k] * prefix[k] * suffix[k + 1] for k in range(n))
    return scalar_sum(terms, kind)


def det_division_free(s: Rank1System) -> Scalar:
    """
    prod d_k + sum_k a_k b_k prod_{l != k} d_l; defined for every input.
    """
    return _division_free(s.factors(), s.products(), s.kind)


def evaluate_corrected(s: Rank1System, *, fallback_rel: Optional[float] = None) -> Evaluation:
    """
    (prod d_k) * (1 + sum a_k b_k / d_k), with the path that produced it.

    Zero factors (exact kinds) and factors below the fallback threshold
    (float kinds) are evaluated through the division-free form instead.
    """
    rel = CFG.FALLBACK_REL if fallback_rel is None else float(fallback_rel)
    d = s.factors()
    ab = s.products()
    fallback, lo = _needs_fallback(d, s.kind, rel)
    if fallback:
        logger.debug("det_corrected: min|d_k|=%r below threshold, using division-free form", lo)
        return Evaluation(_division_free(d, ab, s.kind), EvalPath.FALLBACK, lo)
    ratio = scalar_sum((abk / dk for abk, dk in zip(ab, d)), s.kind)
    value = scalar_prod(d, s.kind) * (one(s.kind) + ratio)
    return Evaluation(value, EvalPath.DIVIDED, lo)


def det_corrected(s: Rank1System) -> Scalar:
    return evaluate_corrected(s).value


def det_erroneous(s: Rank1System) -> Scalar:
    """
    The misprinted variant with denominators x_k instead of x_k - a_k b_k.
    WRONG in general; kept to demonstrate the erratum.
    """
    for k, xk in enumerate(s.x):
        if xk == 0:
            raise FactorDivisionError(k + 1)
    ratio = scalar_sum((abk / xk for abk, xk in zip(s.products(), s.x)), s.kind)
    return scalar_prod(s.factors(), s.kind) * (one(s.kind) + ratio)


# ============================================================
# Multilinearity expansion
# ============================================================
def expansion_matrix(s: Rank1System, subset: ExpansionSubset) -> DenseMatrix:
    """
    Column k is b_k*a for k in the subset and d_k*e_k otherwise.
    """
    subset.validate(s.n)
    n = s.n
    z = zero(s.kind)
    d = s.factors()
    cols = [k + 1 in subset.members for k in range(n)]
    entries = tuple(
        s.b[j] * s.a[i] if cols[j] else (d[j] if i == j else z)
        for i in range(n)
        for j in range(n)
    )
    return DenseMatrix(n, entries, s.kind)


def expansion_term(s: Rank1System, subset: ExpansionSubset) -> Scalar:
    return det_dense(expansion_matrix(s, subset))


def iter_subsets(n: int) -> Iterator[ExpansionSubset]:
    for size in range(n + 1):
        for combo in itertools.combinations(range(1, n + 1), size):
            yield ExpansionSubset(frozenset(combo))


def det_by_expansion(s: Rank1System, *, max_n: Optional[int] = None) -> Scalar:
    """
    Sum of expansion_term over all 2^n subsets.
    """
    limit = CFG.EXPANSION_MAX_N if max_n is None else int(max_n)
    if s.n > limit:
        raise DimensionLimitError("det_by_expansion", s.n, limit)
    return scalar_sum([expansion_term(s, S) for S in iter_subsets(s.n)], s.kind)


# ============================================================
# Overflow-safe log-determinant
# ============================================================
def _sign_log(value: float) -> Tuple[int, float]:
    if value == 0:
        return 0, LOGDET_SINGULAR
    return (1 if value > 0 else -1), math.log(abs(value))


def _logdet_division_free(s: Rank1System, cut: float) -> Tuple[int, float]:
    """
    Division-free form with the large factors pulled out as logs.

    With Z the factors below `cut` and P the product of the rest,
    det = P * (T * prod_Z d + sum_{k in Z} a_k b_k prod_{Z minus k} d)
    where T = 1 + sum_{k not in Z} a_k b_k / d_k.
    """
    def pairs() -> Iterator[Tuple[float, float]]:
        return ((xk - ak * bk, ak * bk) for xk, ak, bk in zip(s.x, s.a, s.b))

    t = math.fsum(itertools.chain((1.0,), (abk / dk for dk, abk in pairs() if abs(dk) >= cut)))
    log_big = math.fsum(math.log(abs(dk)) for dk, _ in pairs() if abs(dk) >= cut)
    negatives = sum(1 for dk, _ in pairs() if dk <= -cut)

    # p = prod_Z d, q = sum_{k in Z} a_k b_k prod_{Z minus k} d
    p, q = 1.0, 0.0
    for dk, abk in pairs():
        if abs(dk) < cut:
            p, q = p * dk, q * dk + abk * p
    rest = t * p + q

    if rest == 0:
        return 0, LOGDET_SINGULAR
    if rest < 0:
        negatives += 1
    return (-1 if negatives % 2 else 1), log_big + math.log(abs(rest))


def logdet_corrected(s: Rank1System, *, fallback_rel: Optional[float] = None) -> Tuple[int, float]:
    """
    (sign, log|det|) of a real float system in O(n) time.

    Streams over the vectors without building d; falls back to the
    division-free form, in log scale, when a factor is below threshold.
    """
    if s.kind is not ScalarKind.F64:
        raise ScalarKindError(f"logdet_corrected needs kind f64, got {s.kind.value}")
    if s.n == 0:
        return 1, 0.0
    rel = CFG.FALLBACK_REL if fallback_rel is None else float(fallback_rel)

    def factors() -> Iterator[float]:
        return (xk - ak * bk for xk, ak, bk in zip(s.x, s.a, s.b))

    lo = math.inf
    hi = 0.0
    negatives = 0
    for dk in factors():
        m = abs(dk)
        lo = min(lo, m)
        hi = max(hi, m)
        if dk < 0:
            negatives += 1
    cut = rel * max(1.0, hi)
    if lo < cut:
        logger.debug("logdet_corrected: min|d_k|=%r below threshold, using division-free form", lo)
        return _logdet_division_free(s, cut)

    t = 1.0 + math.fsum(ak * bk / dk for ak, bk, dk in zip(s.a, s.b, factors()))
    if t == 0:
        return 0, LOGDET_SINGULAR
    if t < 0:
        negatives += 1
    log_abs = math.fsum(math.log(abs(dk)) for dk in factors()) + math.log(abs(t))
    return (-1 if negatives % 2 else 1), log_abs
