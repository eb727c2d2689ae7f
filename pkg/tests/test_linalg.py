import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pmds.algebra import AlgebraSpec
from pmds.construction import CodeParams, Variant
from pmds.linalg import (AlgMatrix, RankVerdict, SingularSystem, det, det3_vandermonde_check,
                         rank_via_unit_pivots, solve_with_unit_pivots)

GF16 = AlgebraSpec.field(4)
R17 = AlgebraSpec.ring(17)


def test_identity_rank():
    assert rank_via_unit_pivots(AlgMatrix.identity(GF16, 3)) == (3, RankVerdict.FULL_COLUMN_RANK)


def test_equal_columns_deficient():
    a = GF16.alpha_pow(3)
    M = AlgMatrix.from_rows(GF16, [[a, a], [1, 1]])
    assert rank_via_unit_pivots(M) == (1, RankVerdict.DEFICIENT)


def test_three_erasure_block_full_rank():
    ap = GF16.alpha_pow
    # row 0 of C0(3,5): columns j = 0, 1, 2
    M = AlgMatrix.from_rows(GF16, [[1, 1, 1], [ap(0), ap(1), ap(2)], [ap(0), ap(-1), ap(-2)]])
    assert rank_via_unit_pivots(M)[1] is RankVerdict.FULL_COLUMN_RANK


def test_ring_inconclusive_on_diagonal_zero_divisors():
    # R17 ~ GF(256) x GF(256): e1 = (1, 0), e2 = (0, 1) are orthogonal idempotents.
    e = _nontrivial_idempotent(R17)
    e2 = e ^ 1
    M = AlgMatrix.from_rows(R17, [[e, e2], [e2, e]])
    # determinant e^2 + e2^2 = e + e2 = 1 is a unit, yet no entry is a unit
    assert det(M) == 1
    assert rank_via_unit_pivots(M) == (0, RankVerdict.INCONCLUSIVE)
    with pytest.raises(SingularSystem):
        solve_with_unit_pivots(M, [1, 0])


def _nontrivial_idempotent(alg):
    for a in range(2, alg.size):
        if alg.mul(a, a) == a:
            return a
    raise AssertionError("no idempotent")


def test_ring_deficient_when_residue_zero():
    ap = R17.alpha_pow
    M = AlgMatrix.from_rows(R17, [[1, ap(3)], [ap(2), ap(5)]])
    assert rank_via_unit_pivots(M) == (1, RankVerdict.DEFICIENT)


def test_solve_identity():
    rhs = [3, 7, 11]
    assert solve_with_unit_pivots(AlgMatrix.identity(GF16, 3), rhs) == rhs


def test_solve_diagonal():
    ap = GF16.alpha_pow
    M = AlgMatrix.from_rows(GF16, [[ap(1), 0], [0, ap(2)]])
    assert solve_with_unit_pivots(M, [ap(2), ap(3)]) == [ap(1), ap(1)]


def test_solve_rejects_shape():
    with pytest.raises(ValueError):
        solve_with_unit_pivots(AlgMatrix.from_rows(GF16, [[1, 0]]), [1])


def test_solve_vectorized_rhs():
    ap = GF16.alpha_pow
    M = AlgMatrix.from_rows(GF16, [[1, 1], [ap(1), ap(4)]])
    rhs = [np.array([1, 2, 3]), np.array([4, 5, 6])]
    x = solve_with_unit_pivots(M, rhs)
    back = M.matvec(x)
    for got, want in zip(back, rhs):
        assert np.array_equal(got, want)


def _random_invertible(alg, size, rng):
    while True:
        rows = rng.integers(0, alg.size, size=(size, size)).tolist()
        M = AlgMatrix.from_rows(alg, rows)
        if rank_via_unit_pivots(M)[1] is RankVerdict.FULL_COLUMN_RANK:
            return M


@pytest.mark.parametrize("alg", [GF16, AlgebraSpec.field(8), AlgebraSpec.ring(5), R17], ids=str)
def test_solve_multiply_back_randomized(alg):
    rng = np.random.default_rng(11)
    for _ in range(250):
        size = int(rng.integers(1, 6))
        M = _random_invertible(alg, size, rng)
        rhs = [int(v) for v in rng.integers(0, alg.size, size=size)]
        assert M.matvec(solve_with_unit_pivots(M, rhs)) == rhs


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 15), min_size=9, max_size=9))
def test_field_rank_never_inconclusive(entries):
    M = AlgMatrix.from_rows(GF16, [entries[0:3], entries[3:6], entries[6:9]])
    rank, verdict = rank_via_unit_pivots(M)
    assert verdict is not RankVerdict.INCONCLUSIVE
    assert (verdict is RankVerdict.FULL_COLUMN_RANK) == (det(M) != 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 255), min_size=25, max_size=25))
def test_det_elimination_matches_cofactor_over_field(entries):
    alg = AlgebraSpec.field(8)
    rows = [entries[5 * k:5 * k + 5] for k in range(5)]
    # 5x5 by elimination vs Laplace expansion along the first row of 4x4 cofactors
    expected = 0
    for c, a in enumerate(rows[0]):
        minor = AlgMatrix.from_rows(alg, [r[:c] + r[c + 1:] for r in rows[1:]])
        expected ^= alg.mul(a, det(minor))
    assert det(AlgMatrix.from_rows(alg, rows)) == expected


# -- det3 Vandermonde check -------------------------------------------------------------

def test_det3_example():
    params = CodeParams(3, 5, Variant.SD_C0, GF16)
    assert det3_vandermonde_check(0, 0, 1, 2, params)


def test_det3_rejects_duplicates():
    params = CodeParams(3, 5, Variant.SD_C0, GF16)
    with pytest.raises(ValueError):
        det3_vandermonde_check(0, 1, 1, 2, params)


@pytest.mark.parametrize("params", [
    CodeParams(4, 4, Variant.SD_C0, R17),
    CodeParams(3, 5, Variant.SD_C0, GF16),
    CodeParams(5, 3, Variant.SD_C0, GF16),
    CodeParams(2, 4, Variant.PMDS_C1, R17),
    CodeParams(3, 5, Variant.PMDS_C1, AlgebraSpec.field(7)),
], ids=lambda p: f"{p.variant.name}-{p.m}x{p.n}-{p.algebra}")
def test_det3_exhaustive(params):
    from itertools import combinations
    checked = 0
    for i in range(params.m):
        for js in combinations(range(params.n), 3):
            assert det3_vandermonde_check(i, *js, params)
            checked += 1
    assert checked == params.m * len(list(combinations(range(params.n), 3)))
