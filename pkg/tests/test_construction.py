from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gkforge.construction import ConstructionState, build, verify_seven
from gkforge.dense import DenseSpace
from gkforge.fields import GF, Rationals
from gkforge.poly import Poly
from gkforge.schedule import Schedule, ScheduleError, provider_from_spec
from gkforge.subspace import basis, contains, full_space, monomials, product, random_element
from gkforge.words import words_of_degree


def dense_case2_U(state, n):
    """U(2^(n+1)) = U H + H U + span(Vbar) for a monomial level, computed densely."""
    F = state.field
    H = full_space(2**n, F)
    U = state.U(n)
    D = DenseSpace.from_subspace(product(U, H)).sum(DenseSpace.from_subspace(product(H, U)))
    V = state.V(n).words
    nxt = set(state.V(n + 1).words)
    for a in V:
        for b in V:
            if a + b not in nxt:
                D.add_poly(Poly.word(a + b, F))
    return D


def test_base_level(default_state):
    assert default_state.V(0).words == ("x", "y")
    U1 = default_state.U(0)
    assert U1.dim == 1 and contains(U1, Poly.word("z"))


def test_small_values(default_state):
    s = default_state
    assert s.V(1).words == ("xx", "xy")
    assert s.V(2).words == ("xxxx", "xxxy")
    assert s.V(3).words == ("x" * 8, "x" * 7 + "y")
    assert s.dim_U(1) == 7


def test_default_v_pattern(default_state):
    for n in range(1, 7):
        k = 2**n
        assert default_state.V(n).words == ("x" * k, "x" * (k - 1) + "y")


@pytest.mark.parametrize("n", [0, 1])
def test_u_matches_dense_definition(default_state, n):
    D = dense_case2_U(default_state, n)
    U = default_state.U(n + 1)
    assert D.dim == U.dim
    for f in D.basis():
        assert default_state.in_U(n + 1, f)


@pytest.mark.parametrize("n", range(0, 7))
def test_seven_conditions_default(default_state, n):
    rep = verify_seven(default_state, n)
    assert rep.passed, str(rep)


def test_scaled_provenance_and_dims(scaled_state):
    cases = [c for _, c in scaled_state.provenance]
    assert cases == ["base", "case2", "case1", "case1", "case3-z", "case1", "case1"]
    assert [scaled_state.dim_V(n) for n in range(7)] == [2, 2, 4, 16, 2, 4, 16]


@pytest.mark.parametrize("n", range(0, 6))
def test_seven_conditions_scaled(scaled_state, n):
    rep = verify_seven(scaled_state, n)
    assert rep.passed, str(rep)


def test_case3_uses_a_projection(scaled_state):
    lvl = scaled_state.level(4)
    assert lvl.F is not None and lvl.F.dim == 100
    assert not lvl.selection
    for f in basis(lvl.F):
        assert scaled_state.in_U(4, f)


def test_case1_squares_v(scaled_state):
    v2 = scaled_state.V(2).words
    assert scaled_state.V(3).words == tuple(sorted(a + b for a in v2 for b in v2))


def test_fault_breaks_cond5_and_cond6(default_state):
    bad = default_state.with_u_fault(2, "zzzz")
    r5 = verify_seven(bad, 2)
    r6 = verify_seven(bad, 1)
    f5 = {c.name: c for c in r5.failures()}
    f6 = {c.name: c for c in r6.failures()}
    assert "cond5" in f5 and f5["cond5"].witness == Poly.word("zzzz")
    assert "cond6" in f6 and f6["cond6"].witness is not None
    assert verify_seven(default_state, 2).passed


def test_json_roundtrip(scaled_state):
    data = json.loads(json.dumps(scaled_state.to_json()))
    back = ConstructionState.from_json(data)
    assert back.provenance == scaled_state.provenance
    rng = np.random.default_rng(3)
    for n in range(5):
        assert back.V(n).words == scaled_state.V(n).words
        for _ in range(10):
            w = "".join(rng.choice(list("xyz"), size=2**n))
            assert back.in_U(n, Poly.word(w)) == scaled_state.in_U(n, Poly.word(w))


@pytest.mark.parametrize("field", [GF(3), Rationals()])
def test_other_fields(field):
    s = build(Schedule(field=field), 4)
    for n in range(5):
        assert verify_seven(s, n).passed


def test_scaled_other_field():
    s = build(Schedule.scaled_default(field=GF(3)), 5)
    for n in range(5):
        assert verify_seven(s, n).passed, str(verify_seven(s, n))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(0, 10_000))
def test_random_u_elements_are_in_u(n, seed):
    s = build(Schedule(), 4)
    rng = np.random.default_rng(seed)
    f = random_element(s.U(n), rng)
    assert s.in_U(n, f)
    for w in s.V(n).words:
        assert not s.in_U(n, Poly.word(w))


def test_schedule_validation():
    with pytest.raises(ScheduleError):
        Schedule(onset=1)
    with pytest.raises(ScheduleError):
        Schedule(onset=3, z_set=frozenset({2}))
    with pytest.raises(ScheduleError):
        provider_from_spec("bogus")


def test_schedule_windows():
    s = Schedule()
    assert s.windows(40)[0] == (5, 26, 31)
    assert s.case_for(3)[0] == 2
    sc = Schedule.scaled_default()
    assert [sc.case_for(n)[0] for n in range(1, 6)] == [1, 1, 3, 1, 1]
    assert sc.label == "scaled constants" and s.label == "default constants"


def test_schedule_json_roundtrip():
    sc = Schedule.scaled_default(seed=4)
    assert Schedule.from_json(json.loads(json.dumps(sc.to_json()))) == sc


def test_file_provider(tmp_path):
    # F ⊆ U(16) needs words outside V(16)V(16)-heavy parts: z-prefixed words lie in U
    w = "z" * 16
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"2": [w, "z" + "x" * 15 + " + " + "z" * 15 + "y"]}))
    sch = Schedule(onset=2, z_set=frozenset({2}), provider_spec=f"file:{p}")
    s = build(sch, 5)
    assert s.level(4).F.dim == 2
    assert verify_seven(s, 4).passed
