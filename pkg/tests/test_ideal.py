from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gkforge.ideal import (
    EOracle,
    TheoremViolation,
    e_membership,
    e_subspace,
    gk_estimate,
    growth_bound,
    growth_table,
    nonnilpotence_witness,
    quotient_dim,
    sufficient_condition,
    sufficient_space,
    verify_ideal,
    window_exponent,
)
from gkforge.poly import Poly, parse_poly
from gkforge.subspace import monomials, random_element, sum_spaces
from gkforge.words import words_of_degree


def forbidden_factor(state, w: str) -> bool:
    """Independent oracle: w is a factor of some v1 v2 with v1, v2 in V(2^(m+1))."""
    m = len(w).bit_length() - 1
    V = state.V(m + 1).words
    return any(w in a + b for a in V for b in V)


def test_membership_examples(default_state):
    s = default_state
    assert e_membership(s, Poly.word("z"))[0]
    ok, wit = e_membership(s, Poly.word("x"))
    assert not ok and wit.j == 0 and wit.b == "xxx" and wit.a == ""
    assert wit.recheck(s, Poly.word("x"))
    ok, wit = e_membership(s, parse_poly("xy - yx"))
    assert not ok and wit is not None


def test_constant_term_rejected(default_state):
    with pytest.raises(ValueError):
        e_membership(default_state, Poly({"": 1}))


@pytest.mark.parametrize("n", range(1, 9))
def test_words_against_factor_oracle(default_state, n):
    for w in words_of_degree(n):
        assert e_membership(default_state, Poly.word(w))[0] == (not forbidden_factor(default_state, w))


@pytest.mark.parametrize("n", range(1, 7))
def test_paths_agree_on_words(default_state, n):
    o = EOracle(default_state)
    m = window_exponent(n)
    D = o.dense_window(m) if 2 ** (m + 2) <= 8 else None
    for w in words_of_degree(n):
        f = Poly.word(w)
        a = o.fast(f, n)[0]
        assert o.generator(f, n)[0] == a
        if D is not None:
            assert o.dense(f, n, D)[0] == a


def test_paths_agree_on_combinations(scaled_state):
    """Non-monomial level: generator and dense paths agree on sums of words."""
    o = EOracle(scaled_state)
    rng = np.random.default_rng(0)
    words = list(words_of_degree(2))
    D = o.dense_window(1)
    for _ in range(40):
        picks = rng.choice(len(words), size=3, replace=False)
        f = Poly({words[k]: 1 for k in picks})
        assert o.generator(f, 2)[0] == o.dense(f, 2, D)[0]


def test_homogeneity(default_state):
    f = parse_poly("z + zx")
    g = parse_poly("z + xx")
    assert e_membership(default_state, f)[0]
    assert not e_membership(default_state, g)[0]


def test_quotient_values(default_state):
    assert [quotient_dim(default_state, n) for n in (1, 2, 4)] == [2, 3, 5]
    E4 = e_subspace(default_state, 4)
    assert sorted(E4.index) == ["xxxx", "xxxy", "xxyx", "xyxx", "yxxx"]


def test_growth_table_two_paths(default_state):
    g1 = growth_table(default_state, 16, "generator")
    g2 = growth_table(default_state, 16, "fast")
    assert g1.rows == g2.rows
    assert [r[1] for r in g1.rows] == [n + 1 for n in range(1, 17)]
    assert all(r[3] for r in g1.rows)
    assert g1.rows[3][2] == sum(r[1] for r in g1.rows[:4])
    slope = gk_estimate(g1)
    assert isinstance(slope, Fraction) and 1 <= slope <= 3
    assert g1.csv().splitlines()[0] == "n,d,D,bound_ok"


def test_growth_bound_is_exact_integer():
    assert growth_bound(2) == 3**34 * 2**18 * 3


@pytest.mark.parametrize("n", range(1, 9))
def test_ideal_property(default_state, n):
    assert verify_ideal(default_state, n).passed


def test_ideal_fault(default_state):
    E2 = e_subspace(default_state, 2)
    bad = sum_spaces(E2, monomials(["xx"], 2))
    rep = verify_ideal(default_state, 2, E=bad)
    assert not rep.passed
    assert rep.failures()[0].witness is not None


def test_ideal_scaled(scaled_state):
    for n in range(1, 5):
        assert verify_ideal(scaled_state, n).passed


def test_sufficient_condition_examples(default_state):
    s = default_state
    for n in (2, 3):
        for w in words_of_degree(n - 1):
            assert sufficient_condition(s, Poly.word("z" + w), n)
    assert not sufficient_condition(s, Poly.word("xxx"), 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_sufficient_space_inside_e(n, seed):
    from gkforge.construction import build
    from gkforge.schedule import Schedule

    s = build(Schedule(), 5)
    r = random_element(sufficient_space(s, n), np.random.default_rng(seed), terms=4)
    assert e_membership(s, r)[0]


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_nonnilpotence_witness(default_state, m):
    word, pieces = nonnilpotence_witness(default_state, m)
    assert word == "x" * 2**m
    assert word in default_state.V(m).wordset
    assert len(pieces) == 2 ** (m - 1)
    assert "".join(pieces) == word
    assert all(p in default_state.V(1).wordset for p in pieces)
    assert not e_membership(default_state, Poly.word(word))[0]


def test_thread_env_is_deterministic(default_state, monkeypatch):
    monkeypatch.setenv("GKFORGE_THREADS", "1")
    a = verify_ideal(default_state, 5).dumps()
    monkeypatch.setenv("GKFORGE_THREADS", "4")
    b = verify_ideal(default_state, 5).dumps()
    assert a == b
