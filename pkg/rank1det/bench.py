from __future__ import annotations

import logging
import statistics
import time
from typing import Callable, Optional, Sequence, Tuple

from rank1det.config import CFG
from rank1det.dense import logdet_dense_float
from rank1det.errors import AgreementError
from rank1det.rank1 import Rank1System, logdet_corrected, to_dense
from rank1det.reports import BenchReport
from rank1det.sampling import make_rng, well_conditioned_system

logger = logging.getLogger(__name__)

__all__ = ["median_seconds", "bench_size", "run_bench"]


def median_seconds(fn: Callable[[], object], repeats: int) -> Tuple[float, object]:
    """
    Median wall time of `repeats` calls, plus the last result.
    """
    times = []
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), result


def bench_size(s: Rank1System, repeats: int, *, agree_tol: Optional[float] = None) -> Tuple[float, float, float, float]:
    """
    Returns (structured_seconds, dense_seconds, |log diff|, structured log).
    Raises AgreementError before timing if the two paths disagree.
    """
    tol = CFG.BENCH_AGREE_TOL if agree_tol is None else float(agree_tol)
    m = to_dense(s)

    sign_s, log_s = logdet_corrected(s)
    sign_d, log_d = logdet_dense_float(m)
    diff = abs(log_s - log_d)
    if sign_s != sign_d or diff > tol:
        raise AgreementError(
            f"n={s.n}: structured ({sign_s}, {log_s!r}) vs dense ({sign_d}, {log_d!r})",
            details={"n": s.n, "structured": [sign_s, log_s], "dense": [sign_d, log_d]},
        )

    t_struct, _ = median_seconds(lambda: logdet_corrected(s), repeats)
    t_dense, _ = median_seconds(lambda: logdet_dense_float(m), repeats)
    return t_struct, t_dense, diff, log_s


def run_bench(*, sizes: Sequence[int], repeats: int, seed: int) -> BenchReport:
    rng = make_rng(seed)
    report = BenchReport(seed=seed, repeats=repeats)
    for n in sizes:
        s = well_conditioned_system(rng, n)
        t_struct, t_dense, diff, log_s = bench_size(s, repeats)
        report.sizes.append(n)
        report.structured_seconds.append(t_struct)
        report.dense_seconds.append(t_dense)
        report.max_log_diff.append(diff)
        report.checksum += log_s
        logger.info("bench n=%d structured=%.3es dense=%.3es diff=%.2e", n, t_struct, t_dense, diff)
    return report
