import itertools
import math
from fractions import Fraction

import pytest

from rank1det.dense import DenseMatrix, det_dense_exact, logdet_dense_float
from rank1det.errors import DimensionLimitError, FactorDivisionError, ScalarKindError
from rank1det.rank1 import (
    EvalPath,
    ExpansionSubset,
    Rank1System,
    det_by_expansion,
    det_corrected,
    det_division_free,
    det_erroneous,
    evaluate_corrected,
    expansion_term,
    iter_subsets,
    logdet_corrected,
    to_dense,
)
from rank1det.sampling import random_system, well_conditioned_system
from rank1det.scalars import ScalarKind

Q, QI, F64, C64 = ScalarKind.Q, ScalarKind.QI, ScalarKind.F64, ScalarKind.C64


def demo(kind=Q):
    return Rank1System.from_values((5, 7), (1, 2), (3, 4), kind)


# ============================================================
# to_dense
# ============================================================
def test_to_dense_examples():
    assert to_dense(demo()).rows() == [[5, 4], [6, 7]]
    assert to_dense(Rank1System.from_values((9,), (5,), (7,), Q)).rows() == [[9]]
    s = Rank1System.from_values((2, 3, 4), (0, 0, 0), (1, 5, 9), Q)
    assert to_dense(s) == DenseMatrix.from_rows([[2, 0, 0], [0, 3, 0], [0, 0, 4]], Q)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        Rank1System.from_values((1, 2), (1,), (1, 2), Q)


# ============================================================
# Formulas on the worked examples
# ============================================================
def test_corrected_examples():
    ev = evaluate_corrected(demo())
    assert ev.value == 11
    assert ev.path is EvalPath.DIVIDED
    assert det_corrected(Rank1System.from_values((4,), (3,), (-5,), Q)) == 4
    assert det_corrected(Rank1System.from_values((2, 3, 4), (0, 0, 0), (1, 5, 9), Q)) == 24
    assert det_corrected(demo(F64)) == pytest.approx(11.0, rel=1e-12)


def test_division_free_examples():
    assert det_division_free(Rank1System.from_values((3, 7), (1, 2), (3, 4), Q)) == -3
    assert det_division_free(Rank1System.from_values((3, 8), (1, 2), (3, 4), Q)) == 0
    assert det_dense_exact(DenseMatrix.from_rows([[3, 4], [6, 8]], Q)) == 0
    assert det_division_free(demo()) == 11


def test_erroneous_examples():
    assert det_erroneous(demo()) == Fraction(-192, 35)
    assert det_erroneous(demo()) != det_dense_exact(to_dense(demo()))
    assert det_erroneous(Rank1System.from_values((2, 3, 4), (0, 0, 0), (1, 5, 9), Q)) == 24


def test_erroneous_single_factor_collapses_to_x():
    # n=1: (x - ab)(1 + ab/x) = x - (ab)^2/x, so it equals x only when ab = 0
    assert det_erroneous(Rank1System.from_values((6,), (0,), (5,), Q)) == 6
    assert det_erroneous(Rank1System.from_values((6,), (1,), (2,), Q)) == Fraction(6) - Fraction(4, 6)


def test_erroneous_reports_zero_index():
    s = Rank1System.from_values((5, 0, 7), (1, 2, 3), (1, 1, 1), Q)
    with pytest.raises(FactorDivisionError) as exc:
        det_erroneous(s)
    assert exc.value.index == 2
    assert isinstance(exc.value, ZeroDivisionError)


def test_expansion_term_examples():
    s = demo()
    assert expansion_term(s, ExpansionSubset.of()) == -2
    assert expansion_term(s, ExpansionSubset.of(1, 2)) == 0
    assert expansion_term(s, ExpansionSubset.of(1)) == -3
    assert expansion_term(s, ExpansionSubset.of(2)) == 16
    with pytest.raises(ValueError):
        expansion_term(s, ExpansionSubset.of(0))
    with pytest.raises(ValueError):
        expansion_term(s, ExpansionSubset.of(3))


def test_expansion_examples():
    assert det_by_expansion(demo()) == 11
    assert det_by_expansion(Rank1System.from_values((), (), (), Q)) == 1
    assert det_by_expansion(Rank1System.from_values((2, 3, 4), (0, 0, 0), (1, 5, 9), Q)) == 24
    with pytest.raises(DimensionLimitError):
        det_by_expansion(Rank1System.from_values([1] * 13, [1] * 13, [1] * 13, Q))


def test_iter_subsets_covers_power_set():
    subsets = list(iter_subsets(4))
    assert len(subsets) == 16
    assert len(set(subsets)) == 16
    assert subsets[0].size == 0


def test_empty_system():
    s = Rank1System.from_values((), (), (), Q)
    assert det_corrected(s) == 1
    assert det_division_free(s) == 1
    assert det_erroneous(s) == 1
    assert logdet_corrected(s.converted(F64)) == (1, 0.0)


# ============================================================
# Properties
# ============================================================
def test_vanishing_lemma_exhaustive(rng):
    for n in range(0, 6):
        for _ in range(3):
            s = random_system(rng, n, Q)
            for size in range(2, n + 1):
                for combo in itertools.combinations(range(1, n + 1), size):
                    assert expansion_term(s, ExpansionSubset(frozenset(combo))) == 0


def test_single_column_terms(rng):
    s = random_system(rng, 5, Q)
    d = s.factors()
    for k in range(5):
        expected = s.a[k] * s.b[k] * math.prod(d[:k] + d[k + 1:])
        assert expansion_term(s, ExpansionSubset.of(k + 1)) == expected


def test_gauge_invariance(rng):
    s = random_system(rng, 6, Q, nonzero_ab=True)
    g = s.gauged(Fraction(3, 7))
    dense, gauged = to_dense(s), to_dense(g)
    assert dense == gauged
    assert det_corrected(g) == det_corrected(s)

    f = well_conditioned_system(rng, 6)
    assert det_corrected(f.gauged(2.5)) == pytest.approx(det_corrected(f), rel=1e-10)


def test_permutation_invariance(rng):
    s = random_system(rng, 6, Q)
    perm = [3, 0, 5, 1, 4, 2]
    p = s.permuted(perm)
    for fn in (det_corrected, det_division_free, det_by_expansion, lambda t: det_dense_exact(to_dense(t))):
        assert fn(p) == fn(s)


def test_gaussian_systems_agree_with_dense(rng):
    for n in range(0, 6):
        s = random_system(rng, n, QI)
        ref = det_dense_exact(to_dense(s))
        assert det_corrected(s) == ref
        assert det_division_free(s) == ref
        assert det_by_expansion(s) == ref


def test_misprint_is_generically_wrong(rng):
    disagree = 0
    for _ in range(500):
        n = int(rng.integers(1, 7))
        s = random_system(rng, n, Q, nonzero_ab=True, nonzero_x=True)
        if det_erroneous(s) != det_dense_exact(to_dense(s)):
            disagree += 1
    assert disagree >= 495


def test_misprint_agrees_without_rank_one_part(rng):
    for n in range(1, 6):
        s = random_system(rng, n, Q, nonzero_x=True)
        s = Rank1System(s.x, s.a, tuple(Fraction(0) for _ in range(n)), Q)
        assert det_erroneous(s) == det_corrected(s) == math.prod(s.x)


# ============================================================
# Singular factors and the fallback path
# ============================================================
@pytest.mark.parametrize("x,a,b", [
    ((3, 7), (1, 2), (3, 4)),              # d_1 = 0
    ((3, 8), (1, 2), (3, 4)),              # d_1 = d_2 = 0
    ((3, 8, 5, 2), (1, 2, 1, 1), (3, 4, 2, 1)),  # two zero factors out of four
    ((0, 7), (1, 2), (0, 4)),              # x_1 = 0 and d_1 = 0
])
def test_zero_factors_take_fallback(x, a, b):
    exact = Rank1System.from_values(x, a, b, Q)
    ref = det_dense_exact(to_dense(exact))

    ev = evaluate_corrected(exact)
    assert ev.path is EvalPath.FALLBACK
    assert ev.value == ref
    assert det_division_free(exact) == ref

    fl = exact.converted(F64)
    ev = evaluate_corrected(fl)
    assert ev.path is EvalPath.FALLBACK
    assert ev.value == pytest.approx(float(ref), rel=1e-9, abs=1e-12)


def test_fallback_threshold():
    tiny = 2.0**-30
    s = Rank1System.from_values((3 + tiny, 7.0), (1.0, 2.0), (3.0, 4.0), F64)
    assert evaluate_corrected(s).path is EvalPath.FALLBACK
    assert evaluate_corrected(s, fallback_rel=2.0**-40).path is EvalPath.DIVIDED
    assert evaluate_corrected(demo(F64)).path is EvalPath.DIVIDED


def test_fallback_continuity():
    eps = 1e-12
    s = Rank1System.from_values((3 + eps, 7.0), (1.0, 2.0), (3.0, 4.0), F64)
    ev = evaluate_corrected(s)
    assert ev.path is EvalPath.FALLBACK
    assert ev.value == pytest.approx(det_division_free(s), rel=1e-6)
    assert ev.value == pytest.approx(-3.0, rel=1e-6)


def test_min_factor_is_recorded():
    ev = evaluate_corrected(demo(F64))
    assert ev.min_factor == 1.0
    assert evaluate_corrected(demo()).min_factor is None


def test_exact_entries_beyond_float_range():
    s = Rank1System.from_values((10**400, 5), (1, 1), (1, 1), Q)
    expected = det_dense_exact(to_dense(s))
    assert expected == (10**400 - 1) * 4 + (10**400 - 1) + 4
    ev = evaluate_corrected(s)
    assert ev.path is EvalPath.DIVIDED
    assert ev.value == expected
    assert det_division_free(s) == expected
    zeroed = Rank1System.from_values((10**400, 1), (1, 1), (1, 1), Q)
    assert evaluate_corrected(zeroed).path is EvalPath.FALLBACK
    assert det_corrected(zeroed) == det_dense_exact(to_dense(zeroed))


# ============================================================
# logdet_corrected
# ============================================================
def test_logdet_examples():
    ident = Rank1System.from_values([1.0] * 5, [0.0] * 5, [3.0] * 5, F64)
    assert logdet_corrected(ident) == (1, 0.0)
    sign, log_abs = logdet_corrected(demo(F64))
    assert sign == 1
    assert log_abs == pytest.approx(math.log(11.0), abs=1e-12)


def test_logdet_sign_and_singular():
    sign, log_abs = logdet_corrected(Rank1System.from_values((3.0, 7.0), (1.0, 2.0), (3.0, 4.0), F64))
    assert sign == -1
    assert log_abs == pytest.approx(math.log(3.0), abs=1e-12)
    assert logdet_corrected(Rank1System.from_values((3.0, 8.0), (1.0, 2.0), (3.0, 4.0), F64)) == (0, 0.0)
    # 1 + sum ab/d == 0 with every d_k nonzero
    assert logdet_corrected(Rank1System.from_values((0.0,), (1.0,), (1.0,), F64)) == (0, 0.0)


def test_logdet_matches_dense(rng):
    for n in (1, 2, 10, 100):
        s = well_conditioned_system(rng, n)
        sign, log_abs = logdet_corrected(s)
        ref_sign, ref_log = logdet_dense_float(to_dense(s))
        assert sign == ref_sign
        assert log_abs == pytest.approx(ref_log, abs=1e-9)


def test_logdet_zero_factor_large_n():
    # prod of the other factors is 10**398, far past the float range
    n = 400
    x, a, b = [10.0] * n, [0.0] * n, [0.0] * n
    x[0], a[0], b[0] = 3.0, 1.0, 3.0
    x[1], a[1], b[1] = 7.0, 2.0, 4.0
    s = Rank1System.from_values(x, a, b, F64)
    sign, log_abs = logdet_corrected(s)
    ref_sign, ref_log = logdet_dense_float(to_dense(s))
    assert (sign, ref_sign) == (-1, -1)
    assert math.isfinite(log_abs)
    assert log_abs == pytest.approx(ref_log, abs=1e-9)
    assert log_abs == pytest.approx(398 * math.log(10.0) + math.log(3.0), abs=1e-9)


def test_logdet_zero_factor_random_background(rng):
    s = well_conditioned_system(rng, 500)
    x, a, b = list(s.x), list(s.a), list(s.b)
    x[7], a[7], b[7] = 0.25, 0.5, 0.5
    t = Rank1System.from_values(x, a, b, F64)
    assert t.factors()[7] == 0.0
    sign, log_abs = logdet_corrected(t)
    ref_sign, ref_log = logdet_dense_float(to_dense(t))
    assert sign == ref_sign
    assert log_abs == pytest.approx(ref_log, abs=1e-6)


def test_logdet_requires_real_float():
    with pytest.raises(ScalarKindError):
        logdet_corrected(demo(Q))
    with pytest.raises(ScalarKindError):
        logdet_corrected(demo(C64))
