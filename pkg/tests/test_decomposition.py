from __future__ import annotations

import pytest

from gkforge.decomposition import (
    QN_BOUND,
    BinaryDecomposition,
    DecompositionTables,
    bits_of,
    dims_row,
    q_of,
    r_of,
    r_summands,
    s_of,
    s_summands,
    split_points,
    verify_absorption,
    verify_direct_sum,
    verify_recursion,
    w_of,
)
from gkforge.dense import DenseSpace
from gkforge.poly import Poly
from gkforge.subspace import full_space, monomials, product, sum_spaces, to_finite
from gkforge.words import words_of_degree


def test_binary_decomposition():
    D = BinaryDecomposition(11)
    assert D.bits == [0, 1, 3]
    assert D.prefix == [0, 1, 3]
    assert D.suffix == [10, 8, 0]
    assert bits_of(8) == [3]
    assert split_points(8) == []
    assert split_points(7) == [1, 2]


def test_w_and_q_values(default_state):
    assert w_of(default_state, 3).words == ("xxx", "xxy", "yxx", "yxy")
    assert q_of(default_state, 3).words == ("xxx", "xxy", "xyx", "xyy")
    assert w_of(default_state, 4).words == q_of(default_state, 4).words == default_state.V(2).words


def test_r_and_s_values(default_state):
    assert r_of(default_state, 3).dim == 23
    assert s_of(default_state, 1).dim == 1
    assert [str(b) for b in s_summands(default_state, 3)] == ["U(1)H(2)", "H(1)U(2)"]
    assert [str(b) for b in r_summands(default_state, 3)] == ["H(2)U(1)", "U(2)H(1)"]


@pytest.mark.parametrize("j", range(1, 7))
def test_r_matches_dense_sum_of_summands(default_state, j):
    """R(j) as a kernel equals the explicit sum of its H U H summands."""
    s = default_state
    F = s.field
    total = None
    for b in r_summands(s, j):
        parts = []
        if b.left:
            parts.append(full_space(b.left, F))
        parts.append(s.U(b.p))
        if b.right:
            parts.append(full_space(b.right, F))
        X = parts[0]
        for P in parts[1:]:
            X = product(X, P)
        D = DenseSpace.from_subspace(to_finite(X))
        total = D if total is None else total.sum(D)
    R = r_of(s, j)
    assert total.dim == R.dim
    for w in words_of_degree(j):
        f = Poly.word(w, F)
        assert total.contains(f) == (w not in q_of(s, j).wordset)


def test_summand_membership(default_state):
    b = s_summands(default_state, 3)[1]  # H(1)U(2)
    assert b.contains(default_state, Poly.word("xzx"))
    assert not b.contains(default_state, Poly.word("xxy"))


@pytest.mark.parametrize("j", range(1, 17))
def test_direct_sums(default_state, j):
    assert verify_direct_sum(default_state, j).passed
    row = dims_row(default_state, j)
    assert row["dimW"] == row["dimQ"] == 2 ** bin(j).count("1")
    assert row["dimW"] + row["dimS"] == 3**j
    assert row["dimQ"] <= QN_BOUND(j)


def test_direct_sum_fault(default_state):
    W = w_of(default_state, 3)
    bad = monomials(list(W.words) + ["xzx"], 3)
    rep = verify_direct_sum(default_state, 3, W=bad)
    assert not rep.passed
    assert rep.failures()[0].witness is not None


@pytest.mark.parametrize("j", range(1, 16))
def test_recursion(default_state, j):
    for t in split_points(j):
        assert verify_recursion(default_state, j, t).passed


def test_recursion_vacuous_at_powers(default_state):
    rep = verify_recursion(default_state, 8, 1)
    assert rep.passed and "vacuous" in rep.checks[0].detail


def test_absorption_all(default_state):
    for j in range(1, 16):
        for t in range(1, 17 - j):
            assert verify_absorption(default_state, j, t).passed, (j, t)


def test_absorption_fault(default_state):
    from gkforge.subspace import to_comonomial

    s = default_state
    # enlarge R(3) by a Q(3) word so that R(3)H(1) escapes R(4)
    big = to_comonomial(sum_spaces(to_finite(r_of(s, 3)), monomials(["xxx"], 3)))
    rep = verify_absorption(s, 3, 1, R={3: big})
    assert not rep.passed
    wit = rep.failures()[0].witness
    assert wit is not None and not s.in_U(2, wit)


def test_scaled_decomposition(scaled_state):
    for j in range(1, 17):
        assert verify_direct_sum(scaled_state, j).passed
    for j in range(1, 12):
        for t in split_points(j):
            assert verify_recursion(scaled_state, j, t).passed


def test_tables_cache(default_state):
    T = DecompositionTables(default_state)
    assert T.R(5) is T.R(5)
    assert T.W(5).dim == 4


def test_out_of_range(default_state):
    with pytest.raises(ValueError):
        w_of(default_state, 2**8)
