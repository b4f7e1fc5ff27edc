from __future__ import annotations

from fractions import Fraction
from itertools import islice

import pytest

from gkforge.construction import build
from gkforge.fields import GF, GF2, Rationals
from gkforge.nil import (
    b_ideal,
    canonical_listing,
    enumerate_elements,
    exceeds,
    format_power_of_two,
    nil_degree_report,
    theta_next,
    verify_bwifi,
)
from gkforge.poly import Poly
from gkforge.schedule import Schedule, ScheduleError
from gkforge.subspace import basis, contains, contains_sub, equal, full_space, monomials, product, to_comonomial, span


def test_exceeds_matches_big_integers():
    for i in range(0, 14):
        for t in range(1, 40):
            assert exceeds(i, t) == (2 ** (2**i) > 3 ** (6 * t))


def test_first_elements():
    els = enumerate_elements(100)
    assert str(els[0].f) == "x" and els[0].i == 5 and els[0].t == 1
    assert els[0].w == str(2**34)
    assert [e.i for e in els] == list(range(5, 105))
    for a, b in zip(els, els[1:]):
        assert a.i < b.i
    for e in els:
        assert e.i >= 5
        if e.i <= 16:
            assert 2 ** (2**e.i) > 3 ** (6 * e.t)
        else:
            # 3^6 = 729 < 2^10, so 2^(2^i) >= 2^(10t) > 3^(6t)
            assert 2**e.i >= 10 * e.t


def test_listing_gf2_prefix():
    first = [str(f) for f in islice(canonical_listing(GF2), 8)]
    assert first[:3] == ["x", "y", "z"]
    assert first[3] == "x + y"


@pytest.mark.parametrize("field,count", [(GF2, 200), (GF(3), 200), (Rationals(), 300)])
def test_listing_has_no_repeats(field, count):
    seen = list(islice(canonical_listing(field), count))
    assert len(set(seen)) == count
    assert all(f and "" not in f.terms for f in seen)


def test_rational_values_cover_signed_rationals():
    from gkforge.nil import _calkin_wilf

    vals = list(islice(_calkin_wilf(), 400))
    assert vals[:6] == [1, -1, Fraction(1, 2), Fraction(-1, 2), 2, -2]
    assert len(set(vals)) == 400
    positives = {v for v in vals if v > 0}
    for a in range(1, 6):
        for b in range(1, 6):
            assert Fraction(a, b) in positives and -Fraction(a, b) in set(vals)


def test_rational_listing_early_terms():
    seen = list(islice(canonical_listing(Rationals()), 50))
    assert seen[0] == Poly({"x": 1}, Rationals())
    assert Poly({"y": -1}, Rationals()) in seen


def test_theta_skips_forward():
    assert theta_next(None, 1) == 5
    assert theta_next(5, 1) == 6
    assert theta_next(None, 10) == 7  # 3^60 has 96 bits, below 2^128
    assert theta_next(None, 14) == 8  # 3^84 has 134 bits, above 2^128
    assert theta_next(7, 1) == 8


def test_power_formatting():
    assert format_power_of_two(10) == "1024"
    assert format_power_of_two(5000) == "2^5000"


def test_nil_degree_report():
    r = nil_degree_report(5)
    assert r["degree"] == "171798691840"
    assert nil_degree_report(5, 2)["degree"] == str(2 * 171798691840)
    assert "not desk-verifiable" in r["status"]
    assert nil_degree_report(20)["w_i"] == f"2^{2**20 + 2}"


def test_b_ideal_components(default_state):
    U = default_state.U(1)
    B = b_ideal(2, U, 6)
    assert equal(B.component(2), U)
    assert B.component(1).dim == 0
    # degree 2n: S H(n) + M(n) S
    assert equal(B.component(4), default_state.T(1))
    for d in range(2, 6):
        assert contains_sub(B.component(d + 1), product(B.component(d), full_space(1)))


def test_bwifi_scaled():
    sch = Schedule.scaled_default(onset=2, seed=0)
    s = build(sch, 6)
    rep = verify_bwifi(s, 2, 6)
    assert rep.passed, str(rep)
    names = [c.name for c in rep.checks]
    for mp1 in (4, 5, 6):
        assert f"m+1={mp1} containment" in names


def test_bwifi_fault_detected():
    s = build(Schedule.scaled_default(onset=2, seed=0), 6)
    U16 = s.U(4)
    f1 = basis(s.level(4).F)[0]
    tw = next(w for w in f1.terms if w not in U16.index)
    bad = s.with_u_fault(5, tw + s.V(4).words[0])
    rep = verify_bwifi(bad, 2, 6)
    assert not rep.passed
    assert all(c.witness is not None for c in rep.failures())


def test_bwifi_needs_z_index():
    s = build(Schedule.scaled_default(), 5)
    with pytest.raises(ScheduleError):
        verify_bwifi(s, 3, 5)
