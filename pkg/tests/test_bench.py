import pytest

import rank1det.bench as bench
from rank1det.bench import bench_size, median_seconds, run_bench
from rank1det.errors import AgreementError
from rank1det.rank1 import Rank1System
from rank1det.sampling import make_rng, well_conditioned_system
from rank1det.scalars import ScalarKind


def test_median_seconds_returns_last_result():
    calls = []
    seconds, result = median_seconds(lambda: calls.append(1) or len(calls), 3)
    assert result == 3
    assert seconds >= 0.0


def test_small_sizes():
    report = run_bench(sizes=[1, 4, 16], repeats=2, seed=0)
    assert report.sizes == [1, 4, 16]
    assert all(t > 0 for t in report.structured_seconds + report.dense_seconds)
    assert all(d <= 1e-6 for d in report.max_log_diff)
    assert len(report.speedups) == 3
    d = report.to_dict()
    assert d["repeats"] == 2 and d["sizes"] == [1, 4, 16]


def test_checksum_is_deterministic():
    a = run_bench(sizes=[8, 32], repeats=1, seed=5)
    b = run_bench(sizes=[8, 32], repeats=1, seed=5)
    assert a.checksum == b.checksum
    assert a.max_log_diff == b.max_log_diff


def test_disagreement_aborts_before_timing(monkeypatch):
    monkeypatch.setattr(bench, "logdet_dense_float", lambda m: (1, 99.0))
    s = Rank1System.from_values((5.0, 7.0), (1.0, 2.0), (3.0, 4.0), ScalarKind.F64)
    with pytest.raises(AgreementError) as exc:
        bench_size(s, 3)
    assert exc.value.details["n"] == 2
    assert exc.value.details["dense"] == [1, 99.0]


def test_structured_path_is_much_faster_at_n2048():
    s = well_conditioned_system(make_rng(0), 2048)
    t_struct, t_dense, diff, _ = bench_size(s, 1)
    assert diff <= 1e-6
    assert t_dense / t_struct >= 50.0
