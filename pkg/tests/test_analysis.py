import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import identity_matrix
from gtcodes import analysis, codes, concat, simulate
from gtcodes.analysis import (cover_margin, distance_stats, estimate_epsilon,
                              is_covered, is_t_disjunct, wilson_interval)
from gtcodes.concat import TestMatrix, pack_dense
from gtcodes.errors import (BudgetExceeded, InvalidParams, NotConstantWeight)
from gtcodes.field import build_field_cached


def brute_stats(dense):
    """Independent oracle: direct double loop over dense columns."""
    n = dense.shape[1]
    dist = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            dist[a, b] = int((dense[:, a] != dense[:, b]).sum())
    nz = dist[dist > 0]
    return {
        "d_min": int(nz.min()) if nz.size else 0,
        "D_avg_min": Fraction(int(dist.sum(axis=1).min()), n),
        "mean_pairwise": Fraction(int(dist.sum()), n * n),
        "D2": Fraction(int((dist ** 2).sum()), n * n),
    }


def test_stats_two_column_example(two_column_matrix):
    st = distance_stats(two_column_matrix)
    assert (st.d_min, st.D_avg_min, st.mean_pairwise, st.D2) == (6, 3, 3, 18)
    assert st.exact


def test_stats_rs_matches_formula(rs_matrix):
    st = distance_stats(rs_matrix)
    assert st.d_min == 4
    assert st.D_avg_min == Fraction(9, 2) == rs_matrix.meta["D_formula"]


def test_stats_identity_example():
    st = distance_stats(identity_matrix(4))
    assert st.d_min == 2
    assert st.mean_pairwise == Fraction(3, 2)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_stats_match_brute_force(seed):
    rng = np.random.default_rng(seed)
    dense = rng.integers(0, 2, size=(rng.integers(4, 40), rng.integers(2, 25)))
    mat = pack_dense(dense.astype(np.uint8))
    st = distance_stats(mat)
    oracle = brute_stats(dense)
    assert st.d_min == oracle["d_min"]
    assert st.D_avg_min == oracle["D_avg_min"]
    assert st.mean_pairwise == oracle["mean_pairwise"]
    assert st.D2 == oracle["D2"]
    assert st.D_avg_min <= st.mean_pairwise
    assert st.D2 >= st.mean_pairwise ** 2


def test_stats_permutation_invariant(rs_matrix):
    rng = np.random.default_rng(7)
    perm = rng.permutation(rs_matrix.N)
    shuffled = TestMatrix(M=rs_matrix.M, N=rs_matrix.N,
                          packed=rs_matrix.packed[perm], meta=rs_matrix.meta)
    assert distance_stats(shuffled) == distance_stats(rs_matrix)


def test_stats_budget():
    big = TestMatrix(M=64, N=70000,
                     packed=np.zeros((70000, 1), dtype=np.uint64))
    with pytest.raises(BudgetExceeded):
        distance_stats(big)


def test_stats_sampled_bounds_exact(rs_matrix):
    exact = distance_stats(rs_matrix)
    st = distance_stats(rs_matrix, mode="sampled", pairs=64, seed=3)
    assert not st.exact
    assert st.d_min >= exact.d_min
    assert st.D_avg_min >= exact.D_avg_min
    full = distance_stats(rs_matrix, mode="sampled", pairs=16 * 16, seed=3)
    assert full.mean_pairwise == exact.mean_pairwise
    assert full.D2 == exact.D2
    assert full.D_avg_min == exact.D_avg_min and full.d_min == exact.d_min


def test_is_covered_examples(rs_matrix):
    ident = identity_matrix(5)
    assert not is_covered(ident, {1, 2}, 3)
    col3 = np.array([[1, 0, 1], [0, 1, 1], [0, 0, 0]], dtype=np.uint8)
    mat = pack_dense(col3)
    assert is_covered(mat, {0, 1}, 2)
    for s in itertools.combinations(range(16), 2):
        for i in range(16):
            if i not in s:
                assert not is_covered(rs_matrix, s, i)
    with pytest.raises(InvalidParams):
        is_covered(ident, {1, 2}, 2)


def test_is_t_disjunct_identity():
    ident = identity_matrix(6)
    for t in range(1, 6):
        ok, witness = is_t_disjunct(ident, t)
        assert ok and witness is None


def test_is_t_disjunct_rs(rs_matrix):
    ok, _ = is_t_disjunct(rs_matrix, 2)
    assert ok
    ok3, witness = is_t_disjunct(rs_matrix, 3)
    assert not ok3
    # independent search for the lexicographically first witness
    expected = next(
        (s, i)
        for s in itertools.combinations(range(16), 3)
        for i in range(16)
        if i not in s and is_covered(rs_matrix, s, i))
    assert witness == expected


def test_is_t_disjunct_budget(rs_matrix):
    with pytest.raises(BudgetExceeded):
        is_t_disjunct(rs_matrix, 5, budget=100)


def test_estimate_epsilon_identity():
    res = estimate_epsilon(identity_matrix(8), 3, 500, seed=1)
    assert res["failure_rate"] == 0.0


def test_estimate_epsilon_duplicate_column():
    dense = np.eye(6, dtype=np.uint8)
    dense[:, 5] = dense[:, 4]
    res = estimate_epsilon(pack_dense(dense), 1, 2000, seed=2)
    assert res["failure_rate"] > 0


def test_estimate_epsilon_matches_exact_fraction(rs_matrix):
    failing = sum(
        1 for s in itertools.combinations(range(16), 3)
        if any(is_covered(rs_matrix, s, i) for i in range(16) if i not in s))
    exact_rate = failing / math.comb(16, 3)
    res = estimate_epsilon(rs_matrix, 3, 10 ** 5, seed=11)
    lo, hi = res["wilson_95_interval"]
    assert lo <= exact_rate <= hi


def test_cover_margin(rs_matrix):
    ident = identity_matrix(5)
    with pytest.raises(NotConstantWeight):
        cover_margin(ident, {0, 1}, 2)
    # twin column: margin equals w
    dense = np.tile(np.array([[1], [1], [0], [0]], dtype=np.uint8), (1, 2))
    twins = TestMatrix(M=4, N=2, packed=pack_dense(dense).packed, meta={"w": 2})
    assert cover_margin(twins, {0}, 1) == 2
    # disjoint supports: margin 0
    dis = TestMatrix(M=4, N=2, packed=pack_dense(np.array(
        [[1, 0], [1, 0], [0, 1], [0, 1]], dtype=np.uint8)).packed,
        meta={"w": 2})
    assert cover_margin(dis, {0}, 1) == 0
    # margin < w implies not covered, exhaustively on the RS matrix
    w = rs_matrix.meta["w"]
    for s in itertools.combinations(range(16), 2):
        for i in range(16):
            if i in s:
                continue
            if cover_margin(rs_matrix, s, i) < w:
                assert not is_covered(rs_matrix, s, i)


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == pytest.approx(0.0, abs=1e-12)
    assert hi == pytest.approx(0.0370, abs=5e-4)
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    with pytest.raises(InvalidParams):
        wilson_interval(0, 0)
