from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gkforge.fields import GF, GF2, Rationals
from gkforge.poly import Poly, homogeneous_components, parse_poly, poly_mul
from gkforge.words import component_dimension, word_from_index, word_index, words_of_degree

word = st.text(alphabet="xyz", min_size=0, max_size=8)


def test_word_index_is_base_three():
    assert word_index("") == 0
    assert word_index("x") == 0
    assert word_index("z") == 2
    assert word_index("yx") == 3
    assert word_index("zzz") == 26


@given(word)
def test_index_roundtrip(w):
    assert word_from_index(len(w), word_index(w)) == w


@given(word, word)
def test_lex_order_matches_index(a, b):
    if len(a) == len(b):
        assert (a < b) == (word_index(a) < word_index(b))


def test_words_of_degree_sorted_and_complete():
    ws = list(words_of_degree(3))
    assert len(ws) == 27 == component_dimension(3)
    assert ws == sorted(ws)
    assert ws[0] == "xxx" and ws[-1] == "zzz"


def test_bad_letter_rejected():
    with pytest.raises(ValueError):
        word_index("xa")


def test_parse_and_print_gf2():
    f = parse_poly("1*xy + yx + zz", GF2)
    assert f.terms == {"xy": 1, "yx": 1, "zz": 1}
    assert parse_poly(str(f), GF2) == f


def test_parse_coefficients_gf3_and_q():
    f = parse_poly("2xy - x", GF(3))
    assert f.coefficient("xy") == 2 and f.coefficient("x") == 2
    g = parse_poly("1/2 xy - 3 z", Rationals())
    assert g.coefficient("xy") == Fraction(1, 2)
    assert g.coefficient("z") == -3


@pytest.mark.parametrize("bad", ["x +", "2*", "xa", "+", "x--y"])
def test_malformed_text_rejected(bad):
    with pytest.raises((SyntaxError, ValueError)):
        parse_poly(bad)


def test_reference_examples():
    assert parse_poly("xy - yx", Rationals()).terms == {"xy": 1, "yx": -1}
    assert parse_poly("2*zz + z", GF(3)).terms == {"zz": 2, "z": 1}


def test_characteristic_two_cancels():
    f = parse_poly("xy + xy", GF2)
    assert not f


def test_noncommutative_product():
    x, y = Poly.word("x"), Poly.word("y")
    assert poly_mul(x, y) != poly_mul(y, x)
    assert poly_mul(x + y, x + y).terms == {"xx": 1, "xy": 1, "yx": 1, "yy": 1}


def test_homogeneous_components():
    f = parse_poly("x + xy + zz + xyz")
    comps = dict(homogeneous_components(f))
    assert set(comps) == {1, 2, 3}
    assert comps[2] == parse_poly("xy + zz")


polys = st.dictionaries(st.text(alphabet="xyz", min_size=1, max_size=3), st.integers(0, 2), max_size=4)


@settings(max_examples=60)
@given(polys, polys, polys)
def test_ring_axioms_gf3(a, b, c):
    F = GF(3)
    A, B, C = Poly(a, F), Poly(b, F), Poly(c, F)
    assert poly_mul(poly_mul(A, B), C) == poly_mul(A, poly_mul(B, C))
    assert poly_mul(A, B + C) == poly_mul(A, B) + poly_mul(A, C)
    assert A - A == Poly.zero(F)


def test_left_right_multiplication_by_words():
    f = parse_poly("x + y")
    assert f.left("z") == parse_poly("zx + zy")
    assert f.right("z") == parse_poly("xz + yz")
