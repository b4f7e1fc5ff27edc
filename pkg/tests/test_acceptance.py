"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
"""

from __future__ import annotations

import os
import subprocess
import sys
import time

import numpy as np
import pytest

from gkforge.construction import build, verify_seven
from gkforge.decomposition import split_points, verify_absorption, verify_direct_sum, verify_recursion
from gkforge.ideal import (
    EOracle,
    e_membership,
    gk_estimate,
    growth_table,
    quotient_dim,
    sufficient_space,
    verify_ideal,
    window_exponent,
)
from gkforge.nil import enumerate_elements, verify_bwifi
from gkforge.poly import Poly
from gkforge.schedule import Schedule
from gkforge.subspace import basis, random_element
from gkforge.words import words_of_degree


def report(k: int, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
    assert ok, detail


def cli(*args, env=None):
    e = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "gkforge.cli", *args], capture_output=True, text=True, env=e)


def test_criterion_01_construction_soundness():
    t0 = time.perf_counter()
    res = cli("verify", "--suite", "thm2")
    elapsed = time.perf_counter() - t0
    text = res.stdout
    ok = res.returncode == 0 and "case1 fired" in text and "case3 fired" in text and "FAIL" not in text
    ok = ok and elapsed < 10
    report(1, ok, f"thm2 suite exit {res.returncode}, all three cases in provenance, {elapsed:.1f}s")


def test_criterion_02_exact_small_values():
    s = build(Schedule(), 3)
    ok = (
        s.V(0).words == ("x", "y")
        and s.U(0).dim == 1
        and s.in_U(0, Poly.word("z"))
        and s.V(1).words == ("xx", "xy")
        and s.V(2).words == ("xxxx", "xxxy")
        and s.V(3).words == ("x" * 8, "x" * 7 + "y")
        and s.dim_U(1) == 7
    )
    report(2, ok, "V(1), U(1), V(2), V(4), V(8), dim U(2)")


def test_criterion_03_direct_sums():
    t0 = time.perf_counter()
    s = build(Schedule(), 4)
    bad = [j for j in range(1, 17) if not verify_direct_sum(s, j).passed]
    elapsed = time.perf_counter() - t0
    report(3, not bad and elapsed < 30, f"S+W and R+Q for j=1..16, failures {bad}, {elapsed:.1f}s")


def test_criterion_04_recursion_and_absorption():
    s = build(Schedule(), 4)
    rec = [(j, t) for j in range(1, 16) for t in split_points(j) if not verify_recursion(s, j, t).passed]
    pairs = [(j, t) for j in range(1, 16) for t in range(1, 17 - j)]
    absn = [p for p in pairs if not verify_absorption(s, *p).passed]
    report(4, not rec and not absn, f"recursion j<=15 and {len(pairs)} absorption pairs, failures {rec + absn}")


def test_criterion_05_ideal_property():
    s = build(Schedule(), 5)
    bad = [n for n in range(1, 9) if not verify_ideal(s, n).passed]
    report(5, not bad, f"E(n) x letters inside E(n+1) for n=1..8 (boundaries 3, 7), failures {bad}")


def test_criterion_06_oracle_equivalence():
    s = build(Schedule(), 5)
    o = EOracle(s)
    total = mism = dense_checked = 0
    for n in range(1, 7):
        m = window_exponent(n)
        D = o.dense_window(m) if 2 ** (m + 2) <= 8 else None
        for w in words_of_degree(n):
            f = Poly.word(w)
            answers = {o.fast(f, n)[0], o.generator(f, n)[0]}
            if D is not None:
                answers.add(o.dense(f, n, D)[0])
                dense_checked += 1
            total += 1
            mism += len(answers) != 1
    report(6, mism == 0, f"{total} words, {dense_checked} fully dense, {mism} disagreements")


def test_criterion_07_quotient_dimensions():
    s = build(Schedule(), 5)
    first = [quotient_dim(s, n) for n in (1, 2, 4)]
    g_fast = growth_table(s, 16, "fast")
    g_gen = growth_table(s, 16, "generator")
    slope = float(gk_estimate(g_gen))
    ok = first == [2, 3, 5] and g_fast.rows == g_gen.rows and all(r[3] for r in g_gen.rows) and 1.0 <= slope <= 3.0
    report(7, ok, f"d(1,2,4)={first}, two paths agree, bound holds, slope {slope:.3f} (pre-window; the asymptotic bound 20 is not desk-testable)")


def test_criterion_08_sufficient_condition():
    s = build(Schedule(), 5)
    rng = np.random.default_rng(2024)
    fails = 0
    for n in range(1, 7):
        space = sufficient_space(s, n)
        for _ in range(200):
            r = random_element(space, rng, terms=4)
            if r and not e_membership(s, r)[0]:
                fails += 1
    report(8, fails == 0, f"1200 random elements of the intersection, {fails} outside E")


def test_criterion_09_nonnilpotence():
    import json

    s = build(Schedule(), 6)
    bad = []
    for m in range(1, 5):
        res = cli("witness", "--non-nilpotent", "--m", str(m))
        data = json.loads(res.stdout)
        w, pieces = data["word"], data["factors"]
        ok = (
            res.returncode == 0
            and w == "x" * 2**m
            and w in s.V(m).wordset
            and not e_membership(s, Poly.word(w))[0]
            and len(pieces) == 2 ** (m - 1)
            and "".join(pieces) == w
            and all(p in s.V(1).wordset for p in pieces)
        )
        if not ok:
            bad.append(m)
    report(9, not bad, f"witnesses x^(2^m) for m=1..4, failures {bad}")


def test_criterion_10_enumeration():
    els = enumerate_elements(100)
    ok = els[0].i == 5 and els[0].t == 1
    ok &= all(a.i < b.i for a, b in zip(els, els[1:]))
    ok &= all(e.i >= 5 and (1 << e.i) >= (3 ** (6 * e.t)).bit_length() for e in els)
    # literal big-integer comparison wherever 2^(2^i) is small enough to form
    ok &= all(2 ** (2**e.i) > 3 ** (6 * e.t) for e in els if e.i <= 16)
    report(10, ok, f"100 elements, indices {els[0].i}..{els[-1].i}")


def test_criterion_11_scaled_bwifi():
    t0 = time.perf_counter()
    res = cli("verify", "--suite", "bwifi", "--i", "2", "--max-m", "6")
    passing = res.returncode == 0 and all(f"m+1={k} containment" in res.stdout for k in (4, 5, 6))
    s = build(Schedule.scaled_default(onset=2, seed=0), 6)
    f1 = basis(s.level(4).F)[0]
    tw = next(w for w in f1.terms if w not in s.U(4).index)
    rep = verify_bwifi(s.with_u_fault(5, tw + s.V(4).words[0]), 2, 6)
    caught = not rep.passed and all(c.witness is not None for c in rep.failures())
    elapsed = time.perf_counter() - t0
    report(11, passing and caught and elapsed < 60, f"passes for m+1=4..6, cond-6 fault caught with witness, {elapsed:.1f}s")


def test_criterion_12_determinism():
    a = cli("verify", "--suite", "all", "--seed", "7", env={"GKFORGE_THREADS": "1"})
    b = cli("verify", "--suite", "all", "--seed", "7", env={"GKFORGE_THREADS": "4"})
    ok = a.returncode == b.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    report(12, ok, f"two runs of verify --suite all, {len(a.stdout)} bytes, identical={a.stdout == b.stdout}")
