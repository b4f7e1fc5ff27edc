from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np
from hypothesis import given, settings, strategies as st

from gkforge.fields import GF, GF2, Rationals
from gkforge.linalg import nullspace, rank, row_space_contains, row_space_intersection, rref


def brute_span_size(M: np.ndarray, p: int) -> int:
    """Count distinct vectors in the row space over GF(p) by enumeration."""
    seen = set()
    for coeffs in product(range(p), repeat=M.shape[0]):
        v = tuple(int(x) for x in (np.array(coeffs) @ M) % p) if M.shape[0] else ()
        seen.add(v)
    return len(seen)


mat = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=80)
@given(mat, st.sampled_from([2, 3, 5]))
def test_rank_matches_enumeration(rows, p):
    F = GF(p)
    M = F.array(rows)
    r = rank(M, F)
    assert p**r == brute_span_size(np.array(rows) % p, p)


@settings(max_examples=60)
@given(mat)
def test_rank_over_q_matches_float(rows):
    M = Rationals().array(rows)
    assert rank(M, Rationals()) == np.linalg.matrix_rank(np.array(rows, dtype=float))


@settings(max_examples=60)
@given(mat, st.sampled_from([2, 3]))
def test_nullspace_is_kernel(rows, p):
    F = GF(p)
    M = F.array(rows)
    N = nullspace(M, F)
    assert N.shape[0] == M.shape[1] - rank(M, F)
    if N.shape[0]:
        assert not F.matmul(M, N.T).any()


def test_rref_is_reduced():
    F = GF2
    R, piv = rref(F.array([[1, 1, 0], [1, 1, 1], [0, 0, 1]]), F)
    assert piv == [0, 2]
    assert R.tolist() == [[1, 1, 0], [0, 0, 1]]


def test_rref_rationals_exact():
    Q = Rationals()
    R, piv = rref(Q.array([[2, 1], [1, 1]]), Q)
    assert piv == [0, 1]
    assert R[0, 0] == Fraction(1) and R[0, 1] == 0


def test_containment_and_intersection():
    F = GF2
    A = F.array([[1, 0, 0], [0, 1, 0]])
    B = F.array([[1, 1, 0], [0, 0, 1]])
    R, piv = rref(A, F)
    assert row_space_contains(R, piv, F.array([[1, 1, 0]]), F).tolist() == [True]
    assert row_space_contains(R, piv, F.array([[0, 0, 1]]), F).tolist() == [False]
    I = row_space_intersection(A, B, F)
    assert rank(I, F) == 1
