from __future__ import annotations

import logging
import math
from collections import Counter
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from rank1det.config import CFG
from rank1det.dense import DenseMatrix, det_cofactor, det_dense, det_dense_exact
from rank1det.errors import FactorDivisionError
from rank1det.formats import dump_rank1
from rank1det.fubini_study import ChartPoint, EinsteinReport, fs_einstein_check
from rank1det.rank1 import (
    Rank1System,
    det_by_expansion,
    det_division_free,
    det_erroneous,
    evaluate_corrected,
    to_dense,
)
from rank1det.reports import (
    ErratumReport,
    VerifyReport,
    encode_einstein,
    encode_scalar,
    encode_system,
    UNDEFINED_ERRONEOUS,
)
from rank1det.sampling import make_rng, random_chart_point, random_system
from rank1det.scalars import Scalar, ScalarKind, convert, is_close, magnitude

logger = logging.getLogger(__name__)

# Fixed forever: the counterexample to the misprinted formula.
DEMO_INSTANCE = Rank1System.from_values((5, 7), (1, 2), (3, 4), ScalarKind.Q)


def term_scale(s: Rank1System) -> float:
    """
    |prod d_k| + sum_k |a_k b_k| prod_{l != k} |d_l|: the size of the terms
    whose sum is the determinant; float error is measured against it.
    Exact kinds compare by equality and get 0.0.
    """
    if s.kind.is_exact:
        return 0.0
    d = [magnitude(v) for v in s.factors()]
    ab = [magnitude(v) for v in s.products()]
    total = math.prod(d)
    for k, abk in enumerate(ab):
        total += abk * math.prod(d[:k] + d[k + 1:])
    return total


def _agrees(value: Scalar, reference: Scalar, kind: ScalarKind, scale: float, rtol: float) -> bool:
    return is_close(value, reference, kind, rtol=rtol, atol=rtol * max(1.0, scale))


# ============================================================
# verify: oracle equivalence over seeded random instances
# ============================================================
def check_instance(exact: Rank1System, kind: ScalarKind, *, rtol: Optional[float] = None,
                   expansion_cap: Optional[int] = None) -> Tuple[bool, Dict[str, Any], List[str]]:
    """
    Evaluates every determinant path on `exact` converted to `kind` and
    compares each with the exact dense oracle.
    """
    rtol = CFG.FLOAT_RTOL if rtol is None else float(rtol)
    cap = CFG.EXPANSION_MAX_N if expansion_cap is None else int(expansion_cap)

    reference = det_dense_exact(to_dense(exact))
    s = exact.converted(kind)
    ref = convert(reference, kind)
    scale = term_scale(s)

    ev = evaluate_corrected(s)
    values = {"corrected": ev.value, "division_free": det_division_free(s)}
    # float expansion terms with |S| >= 2 vanish only up to roundoff
    if kind.is_exact and s.n <= cap:
        values["expansion"] = det_by_expansion(s, max_n=cap)

    ok = all(_agrees(v, ref, kind, scale, rtol) for v in values.values())
    details = {name: encode_scalar(v, kind) for name, v in values.items()}
    details["dense"] = encode_scalar(ref, kind)
    details["corrected_path"] = ev.path.value
    return ok, details, [ev.path.value, "division_free"]


def run_verify(*, seed: int, trials: int, max_n: int, kind: ScalarKind,
               expansion_cap: Optional[int] = None) -> VerifyReport:
    cap = CFG.EXPANSION_MAX_N if expansion_cap is None else int(expansion_cap)
    exact_kind = kind.exact_counterpart
    rng = make_rng(seed)
    paths: Counter = Counter()
    dims = set()
    report = VerifyReport(seed=seed, trials=trials, kind=kind.value)

    for t in range(trials):
        n = int(rng.integers(0, max_n + 1))
        dims.add(n)
        exact = random_system(rng, n, exact_kind)
        ok, details, used = check_instance(exact, kind, expansion_cap=cap)
        paths.update(used)
        if "expansion" in details:
            report.expansion_checked += 1
        if ok:
            continue
        report.mismatches += 1
        if report.first_mismatch is None:
            report.first_mismatch = {"trial": t, "instance": dump_rank1(exact), "values": details}
            logger.warning("verify: mismatch at trial %d (n=%d): %s", t, n, details)

    report.dims = sorted(dims)
    report.paths_used = dict(paths)
    logger.info("verify: %d trials, %d mismatches, paths=%s", trials, report.mismatches, report.paths_used)
    return report


# ============================================================
# erratum: corrected vs misprinted vs dense
# ============================================================
def run_erratum(instance: Optional[Rank1System] = None, *, rtol: Optional[float] = None) -> ErratumReport:
    rtol = CFG.FLOAT_RTOL if rtol is None else float(rtol)
    s = DEMO_INSTANCE if instance is None else instance
    ev = evaluate_corrected(s)
    dense = det_dense(to_dense(s))
    try:
        erroneous: Optional[Scalar] = det_erroneous(s)
    except FactorDivisionError as e:
        logger.info("erratum: misprinted formula undefined (%s)", e)
        erroneous = None
    scale = term_scale(s)
    return ErratumReport(
        instance=s,
        corrected=ev.value,
        erroneous=erroneous,
        dense=dense,
        agree_corrected_dense=_agrees(ev.value, dense, s.kind, scale, rtol),
        agree_erroneous_dense=erroneous is not None and _agrees(erroneous, dense, s.kind, scale, rtol),
        corrected_path=ev.path.value,
    )


# ============================================================
# fscheck: Einstein property at sampled chart points
# ============================================================
def run_fscheck(*, n: int, points: int, h: float, seed: int,
                extra_points: Sequence[ChartPoint] = ()) -> Tuple[List[EinsteinReport], Dict[str, Any]]:
    """
    Origin first, then points-1 samples from the polydisk, then extras.
    """
    rng = make_rng(seed)
    sample = [ChartPoint.of([0] * n)]
    sample.extend(random_chart_point(rng, n) for _ in range(points - 1))
    sample.extend(extra_points)

    tolerance = CFG.FSCHECK_TOL_FACTOR * h * h
    reports = [fs_einstein_check(p, h) for p in sample]
    failing = [i for i, r in enumerate(reports) if not r.passed(tolerance)]
    for i in failing:
        logger.warning("fscheck: point %d deviation %.3e > %.3e", i, reports[i].max_abs_deviation, tolerance)

    summary = {
        "n": n,
        "points": len(reports),
        "step": h,
        "seed": seed,
        "tolerance": tolerance,
        "max_deviation": max(r.max_abs_deviation for r in reports),
        "max_constant_error": max(abs(r.estimated_constant - r.expected_constant) for r in reports),
        "passed": not failing,
    }
    return reports, summary


def encode_fscheck(reports: List[EinsteinReport], summary: Dict[str, Any]) -> Dict[str, Any]:
    return {"reports": [encode_einstein(r) for r in reports], "summary": summary}


# ============================================================
# det: every path on one instance
# ============================================================
def run_det(obj: Union[Rank1System, DenseMatrix], *, rtol: Optional[float] = None) -> Tuple[bool, Dict[str, Any]]:
    rtol = CFG.FLOAT_RTOL if rtol is None else float(rtol)
    if isinstance(obj, DenseMatrix):
        body: Dict[str, Any] = {"input": "dense", "n": obj.n, "kind": obj.kind.value}
        value = det_dense(obj)
        body["dense"] = encode_scalar(value, obj.kind)
        ok = True
        if obj.n <= CFG.COFACTOR_MAX_N:
            cof = det_cofactor(obj)
            body["cofactor"] = encode_scalar(cof, obj.kind)
            ok = is_close(cof, value, obj.kind, rtol=rtol, atol=rtol)
        return ok, body

    s = obj
    ev = evaluate_corrected(s)
    dense = det_dense(to_dense(s))
    scale = term_scale(s)
    values = {"corrected": ev.value, "division_free": det_division_free(s)}
    if s.kind.is_exact and s.n <= CFG.EXPANSION_MAX_N:
        values["expansion"] = det_by_expansion(s)
    body = {"input": "rank1", "instance": encode_system(s), "corrected_path": ev.path.value}
    body.update({name: encode_scalar(v, s.kind) for name, v in values.items()})
    try:
        body["erroneous"] = encode_scalar(det_erroneous(s), s.kind)
    except FactorDivisionError:
        body["erroneous"] = UNDEFINED_ERRONEOUS
    body["dense"] = encode_scalar(dense, s.kind)
    ok = all(_agrees(v, dense, s.kind, scale, rtol) for v in values.values())
    body["agree"] = ok
    return ok, body
