"""The homogeneous ideal E and the quotient it defines.

A homogeneous r of degree n, with 2**m <= n < 2**(m+1), lies in E when every
product a r b of total degree L = 2**(m+2) (a of any degree j) lands in

    T_{m+1} = U(2**(m+1)) H(2**(m+1)) + H(2**(m+1)) U(2**(m+1)).

T is co-monomial with a small excluded set X (the "forbidden" concatenation
words when U is monomial).  Since a r b only meets X through the words of X
that start with a and end with b, membership reduces to finitely many linear
conditions on the coefficients of r at the length-n factors of X.

Three independent routes are provided:

* ``fast``: words only; w is outside E iff w is a factor of a forbidden word
  (valid when U(2**(m+1)) is monomial);
* ``generator``: the linear conditions above, for any co-monomial T;
* ``dense``: the raw definition on the dense engine (windows of degree <= 8).
"""

from __future__ import annotations

import math
import os
import threading
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .construction import ConstructionState
from .decomposition import r_of, s_of
from .dense import DENSE_MAX_DEGREE, DenseSpace
from .linalg import rref
from .poly import Poly, homogeneous_components
from .reports import Report
from .subspace import (
    CoMonomialSpace,
    basis,
    contains,
    full_space,
    intersect,
    kernel_product,
    random_element,
)
from .words import words_of_degree

__all__ = [
    "EMembershipWitness",
    "EOracle",
    "GrowthReport",
    "window_exponent",
    "e_membership",
    "e_subspace",
    "quotient_dim",
    "verify_ideal",
    "sufficient_condition",
    "sufficient_space",
    "growth_table",
    "gk_estimate",
    "nonnilpotence_witness",
    "growth_bound",
    "TheoremViolation",
    "thread_count",
]


class TheoremViolation(AssertionError):
    """A hypothesis held but the promised conclusion failed (a construction bug)."""


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("GKFORGE_THREADS", "1")))
    except ValueError:
        return 1


def window_exponent(n: int) -> int:
    """m with 2**m <= n < 2**(m+1)."""
    if n < 1:
        raise ValueError("degree must be positive")
    return n.bit_length() - 1


def growth_bound(n: int) -> int:
    return 3**34 * n**18 * (n + 1)


@dataclass(frozen=True)
class EMembershipWitness:
    n: int
    m: int
    j: int
    a: str
    b: str
    component: Poly  # part of a r b on the excluded words that violates the constraints

    def recheck(self, state: ConstructionState, r: Poly) -> bool:
        """True when a r_n b really lies outside the window subspace."""
        rn = dict(homogeneous_components(r)).get(self.n)
        if rn is None:
            return False
        prod = rn.left(self.a).right(self.b)
        return not state.in_window(self.m + 1, prod)

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "j": self.j, "a": self.a, "b": self.b, "component": str(self.component)}


class EOracle:
    """Per-degree membership data for one construction state (fill-once caches)."""

    def __init__(self, state: ConstructionState):
        self.state = state
        self.field = state.field
        self._lock = threading.Lock()
        self._factors: dict[int, dict[str, tuple[int, str]]] = {}
        self._spaces: dict[int, CoMonomialSpace] = {}
        self._T: dict[int, CoMonomialSpace] = {}

    def _need(self, n: int) -> int:
        m = window_exponent(n)
        if m + 1 > self.state.max_pow:
            raise ValueError(f"degree {n} needs level {m + 1}, built through {self.state.max_pow}")
        return m

    def window_space(self, m: int) -> CoMonomialSpace:
        T = self._T.get(m)
        if T is None:
            T = self.state.T(m + 1)
            with self._lock:
                T = self._T.setdefault(m, T)
        return T

    def fast_available(self, n: int) -> bool:
        m = self._need(n)
        return self.state.is_monomial(m + 1) and not self.state.level(m + 1).faults

    # -- fast path: factors of forbidden words ---------------------------
    def factors(self, n: int) -> dict[str, tuple[int, str]]:
        """Length-n factors of the forbidden words, each with one (offset, word)."""
        hit = self._factors.get(n)
        if hit is not None:
            return hit
        m = self._need(n)
        words = self.state.level(m + 1).words
        L = 2 ** (m + 2)
        out: dict[str, tuple[int, str]] = {}
        for v1 in words:
            for v2 in words:
                v = v1 + v2
                for j in range(L - n + 1):
                    out.setdefault(v[j : j + n], (j, v))
        with self._lock:
            return self._factors.setdefault(n, out)

    def fast(self, r: Poly, n: int) -> tuple[bool, EMembershipWitness | None]:
        if not self.fast_available(n):
            raise ValueError(f"fast path needs a monomial U at level {window_exponent(n) + 1}")
        F = self.field
        m = window_exponent(n)
        fac = self.factors(n)
        for w in sorted(r.terms):
            hit = fac.get(w)
            if hit is not None:
                j, v = hit
                a, b = v[:j], v[j + n :]
                comp = Poly({v: r.terms[w]}, F)
                return False, EMembershipWitness(n, m, j, a, b, comp)
        return True, None

    # -- generator path: linear conditions on factor coefficients --------
    def space(self, n: int) -> CoMonomialSpace:
        """E(n) as a co-monomial space."""
        hit = self._spaces.get(n)
        if hit is not None:
            return hit
        m = self._need(n)
        F = self.field
        T = self.window_space(m)
        L = 2 ** (m + 2)
        X, C = T.excluded, T.constraints
        mids = sorted({x[j : j + n] for x in X for j in range(L - n + 1)})
        pos = {w: k for k, w in enumerate(mids)}
        blocks = []
        for j in range(L - n + 1):
            groups: dict[tuple[str, str], list[int]] = {}
            for col, x in enumerate(X):
                groups.setdefault((x[:j], x[j + n :]), []).append(col)
            for cols in groups.values():
                block = F.zeros((C.shape[0], len(mids)))
                for col in cols:
                    block[:, pos[X[col][j : j + n]]] = C[:, col]
                blocks.append(block)
        K = np.concatenate(blocks) if blocks and C.shape[0] else F.zeros((0, len(mids)))
        E = CoMonomialSpace(mids, K, n, F)
        with self._lock:
            return self._spaces.setdefault(n, E)

    def generator(self, r: Poly, n: int) -> tuple[bool, EMembershipWitness | None]:
        m = self._need(n)
        E = self.space(n)
        if contains(E, r):
            return True, None
        F = self.field
        T = self.window_space(m)
        L = 2 ** (m + 2)
        idx = T.index
        for j in range(L - n + 1):
            seen = set()
            for x in T.excluded:
                a, b = x[:j], x[j + n :]
                if (a, b) in seen:
                    continue
                seen.add((a, b))
                prod = r.left(a).right(b)
                if not contains(T, prod):
                    comp = Poly({w: c for w, c in prod.terms.items() if w in idx}, F)
                    return False, EMembershipWitness(n, m, j, a, b, comp)
        raise TheoremViolation("generator path found no witness for a non-member")

    # -- dense path -------------------------------------------------------
    def dense_window(self, m: int) -> DenseSpace:
        L = 2 ** (m + 2)
        if L > min(8, DENSE_MAX_DEGREE):
            raise ValueError("dense E check is limited to windows of degree <= 8")
        F = self.field
        half = 2 ** (m + 1)
        U = self.state.U(m + 1)
        D = DenseSpace(L, F)
        gens = basis(U)
        for h in words_of_degree(half):
            for u in gens:
                D.add_poly(u.right(h))
                D.add_poly(u.left(h))
        return D

    def dense(self, r: Poly, n: int, D: DenseSpace | None = None) -> tuple[bool, EMembershipWitness | None]:
        m = self._need(n)
        L = 2 ** (m + 2)
        D = D if D is not None else self.dense_window(m)
        for j in range(L - n + 1):
            for a in words_of_degree(j):
                for b in words_of_degree(L - n - j):
                    prod = r.left(a).right(b)
                    if not D.contains(prod):
                        return False, EMembershipWitness(n, m, j, a, b, prod)
        return True, None

    # -- dispatch ---------------------------------------------------------
    def member(self, r: Poly, method: str = "auto") -> tuple[bool, EMembershipWitness | None]:
        if "" in r.terms:
            raise ValueError("elements of E have zero constant term")
        for n, rn in homogeneous_components(r):
            self._need(n)
        for n, rn in homogeneous_components(r):
            how = method
            if how == "auto":
                how = "fast" if self.fast_available(n) else "generator"
            ok, wit = getattr(self, how)(rn, n)
            if not ok:
                return False, wit
        return True, None


_ORACLES: "weakref.WeakKeyDictionary[ConstructionState, EOracle]" = weakref.WeakKeyDictionary()
_ORACLES_LOCK = threading.Lock()


def _oracle(state: ConstructionState) -> EOracle:
    with _ORACLES_LOCK:
        o = _ORACLES.get(state)
        if o is None:
            o = _ORACLES[state] = EOracle(state)
    return o


def e_membership(state: ConstructionState, r: Poly, method: str = "auto") -> tuple[bool, EMembershipWitness | None]:
    """Is ``r`` in E?  Returns (answer, witness when the answer is no)."""
    return _oracle(state).member(r, method)


def e_subspace(state: ConstructionState, n: int) -> CoMonomialSpace:
    return _oracle(state).space(n)


def quotient_dim(state: ConstructionState, n: int, method: str = "generator") -> int:
    """dim H(n)/E(n).  ``fast`` counts factors; ``generator`` uses the constraints."""
    o = _oracle(state)
    if method == "fast":
        if not o.fast_available(n):
            raise ValueError("fast path unavailable at this degree")
        return len(o.factors(n))
    return o.space(n).codim


# ---------------------------------------------------------------------------
# ideal property


def _pmap(fn, items):
    k = thread_count()
    if k == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as ex:
        return list(ex.map(fn, items))


def verify_ideal(state: ConstructionState, n: int, E=None) -> Report:
    """Letters times a basis of E(n), on either side, stay in E(n+1).

    The basis of a co-monomial E(n) is every free word plus the correction
    basis.  ``E`` overrides E(n) (fault injection).
    """
    rep = Report(f"ideal property at n={n}", labels=[state.schedule.label])
    o = _oracle(state)
    F = state.field
    E = o.space(n) if E is None else E
    gens: list[Poly] = []
    if isinstance(E, CoMonomialSpace):
        excl = E.index
        gens = [Poly.word(w, F) for w in words_of_degree(n) if w not in excl]
        corr = E.correction()
        gens += basis(corr) if corr.dim else []
    else:
        gens = basis(E)

    def probe(g: Poly):
        for letter in "xyz":
            for side, prod in (("left", g.left(letter)), ("right", g.right(letter))):
                ok, wit = e_membership(state, prod)
                if not ok:
                    return (str(g), letter, side, wit.to_json())
        return None

    bad = [b for b in _pmap(probe, gens) if b is not None]
    rep.add(
        "letters·E(n)·letters ⊆ E(n+1)",
        not bad,
        f"{len(gens)} basis elements × 3 letters × 2 sides",
        bad[0] if bad else None,
    )
    return rep


# ---------------------------------------------------------------------------
# sufficient condition


def sufficient_space(state: ConstructionState, n: int) -> CoMonomialSpace:
    """∩_t [S(t)H(n-t) + H(t)R(n-t)] for 0 <= t <= n (t=0: R(n), t=n: S(n))."""
    parts = [r_of(state, n), s_of(state, n)]
    for t in range(1, n):
        parts.append(kernel_product(s_of(state, t), r_of(state, n - t)))
    out = parts[0]
    for P in parts[1:]:
        out = intersect(out, P)
    return out


def sufficient_condition(state: ConstructionState, r: Poly, n: int | None = None) -> bool:
    """Whether r satisfies the sufficient hypothesis at every split t.

    When it does, membership in E is asserted (raises TheoremViolation if not).
    """
    if n is None:
        n = r.degree
    if not r.is_homogeneous(n):
        raise ValueError(f"{r} is not homogeneous of degree {n}")
    for t in range(n + 1):
        if t == 0:
            space = r_of(state, n)
        elif t == n:
            space = s_of(state, n)
        else:
            space = kernel_product(s_of(state, t), r_of(state, n - t))
        if not contains(space, r):
            return False
    ok, wit = e_membership(state, r)
    if not ok:
        raise TheoremViolation(f"{r} satisfies the hypothesis but is not in E: {wit}")
    return True


# ---------------------------------------------------------------------------
# growth


@dataclass
class GrowthReport:
    rows: list[tuple[int, int, int, bool]]  # (n, d, D, bound_ok)
    label: str = ""

    @property
    def d(self) -> dict[int, int]:
        return {n: d for n, d, _, _ in self.rows}

    def csv(self) -> str:
        lines = ["n,d,D,bound_ok"]
        lines += [f"{n},{d},{D},{str(ok).lower()}" for n, d, D, ok in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> list[dict]:
        return [{"n": n, "d": d, "D": D, "bound_ok": ok} for n, d, D, ok in self.rows]


def growth_table(state: ConstructionState, max_n: int, method: str = "generator") -> GrowthReport:
    rows = []
    acc = 0
    for n in range(1, max_n + 1):
        d = quotient_dim(state, n, method)
        acc += d
        rows.append((n, d, acc, d <= growth_bound(n)))
    return GrowthReport(rows, state.schedule.label)


def gk_estimate(report: GrowthReport) -> Fraction:
    """Least-squares slope of log D(n) against log n over the top half of the table."""
    rows = [r for r in report.rows if r[2] > 0]
    if len(rows) < 2:
        raise ValueError("need at least two rows")
    top = rows[len(rows) // 2 :] if len(rows) >= 4 else rows
    xs = np.array([math.log(n) for n, *_ in top])
    ys = np.array([math.log(D) for _, _, D, _ in top])
    slope = np.polyfit(xs, ys, 1)[0]
    return Fraction(float(slope)).limit_denominator(10000)


# ---------------------------------------------------------------------------
# non-nilpotence


def nonnilpotence_witness(state: ConstructionState, m: int) -> tuple[str, list[str]]:
    """A word of V(2**m) outside E together with its split into V(2) words."""
    if m < 1:
        raise ValueError("m must be at least 1")
    v2 = set(state.level(1).words)
    for r in state.level(m).words:
        pieces = [r[k : k + 2] for k in range(0, len(r), 2)]
        if not all(p in v2 for p in pieces):
            continue
        ok, _ = e_membership(state, Poly.word(r, state.field))
        if not ok:
            return r, pieces
    raise TheoremViolation(f"no word of V(2^{m}) outside E: construction bug")
