"""Enumeration of the augmentation ideal, truncated right ideals B_n(S), and
the scaled-mode check that B_r(U(r)) meets H(2**(m+2)) inside the window
subspace.

Constants such as w_i = 4 * 2**(2**i) are far too large to write out for
most i, so they are carried as exponents of two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, count, islice, product as iproduct
from typing import Iterator

import numpy as np

from .construction import ConstructionState
from .fields import GF, Field, GF2, Rationals
from .poly import Poly
from .reports import Report
from .schedule import ScheduleError
from .subspace import (
    CoMonomialSpace,
    GradedSubspace,
    SubspaceError,
    basis,
    contains_sub,
    equal,
    full_space,
    kernel_product,
    product,
    to_comonomial,
    witness_outside,
    zero_space,
)
from .words import ALPHABET, words_of_degree

__all__ = [
    "EnumeratedElement",
    "canonical_listing",
    "theta_next",
    "exceeds",
    "enumerate_elements",
    "TruncatedRightIdeal",
    "b_ideal",
    "verify_bwifi",
    "nil_degree_report",
    "w_exponent",
    "format_power_of_two",
]

MIN_INDEX = 5
DECIMAL_LIMIT = 4096  # print 2**e in decimal only up to this exponent


def exceeds(i: int, t: int) -> bool:
    """Exact test of 2**(2**i) > 3**(6*t) without forming 2**(2**i).

    For N >= 1 with b = N.bit_length(): 2**k > N iff k >= b.
    """
    return (1 << i) >= (3 ** (6 * t)).bit_length()


def w_exponent(i: int) -> int:
    """e with w_i = 4 * 2**(2**i) = 2**e."""
    return 2**i + 2


def format_power_of_two(e: int) -> str:
    return str(2**e) if e <= DECIMAL_LIMIT else f"2^{e}"


@dataclass(frozen=True)
class EnumeratedElement:
    s: int  # position in the canonical listing (1-based)
    i: int  # index theta(s)
    f: Poly
    t: int  # degree of f

    @property
    def w_exp(self) -> int:
        return w_exponent(self.i)

    @property
    def w(self) -> str:
        return format_power_of_two(self.w_exp)

    def to_json(self) -> dict:
        return {"i": self.i, "f_i": str(self.f), "t_i": self.t, "w_i": self.w}


def _words_upto(D: int) -> list[str]:
    return [w for n in range(1, D + 1) for w in words_of_degree(n)]


def _calkin_wilf() -> Iterator[Fraction]:
    """1, -1, 1/2, -1/2, 2, -2, ...: every nonzero rational exactly once."""
    q = Fraction(1)
    while True:
        yield q
        yield -q
        q = 1 / (2 * (q.numerator // q.denominator) + 1 - q)


def _listing_gf(field: GF) -> Iterator[Poly]:
    coeffs = range(1, field.p)
    for D in count(1):
        words = _words_upto(D)
        for k in range(1, len(words) + 1):
            for combo in combinations(words, k):
                if len(combo[-1]) != D and max(len(w) for w in combo) != D:
                    continue
                for cs in iproduct(coeffs, repeat=k):
                    yield Poly(dict(zip(combo, cs)), field)


def _listing_q(field: Rationals) -> Iterator[Poly]:
    values: list[Fraction] = []
    cw = _calkin_wilf()
    for h in count(1):
        while len(values) < h:
            values.append(next(cw))
        for D in range(1, h + 1):
            words = _words_upto(D)
            for k in range(1, len(words) + 1):
                for combo in combinations(words, k):
                    if max(len(w) for w in combo) != D:
                        continue
                    for idx in iproduct(range(h), repeat=k):
                        if D != h and max(idx) != h - 1:
                            continue
                        yield Poly(dict(zip(combo, (values[i] for i in idx))), field)


def canonical_listing(field: Field = GF2) -> Iterator[Poly]:
    """Every nonzero polynomial without constant term, each exactly once.

    GF(p): by degree, then number of terms, then word combination (shortlex),
    then coefficient tuple.  Q: diagonal stages h over degree <= h and the
    first h rationals of a signed Calkin-Wilf sequence, each stage listing only
    what is new in it.
    """
    if isinstance(field, GF):
        return _listing_gf(field)
    if isinstance(field, Rationals):
        return _listing_q(field)
    raise TypeError(f"unsupported field {field!r}")


def theta_next(prev: int | None, t: int) -> int:
    """Smallest i > prev (and > 4) with 2**(2**i) > 3**(6t)."""
    i = MIN_INDEX if prev is None else max(prev + 1, MIN_INDEX)
    while not exceeds(i, t):
        i += 1
    return i


def enumerate_elements(count_: int, field: Field = GF2) -> list[EnumeratedElement]:
    out = []
    prev = None
    for s, g in enumerate(islice(canonical_listing(field), count_), start=1):
        t = g.degree
        i = theta_next(prev, t)
        out.append(EnumeratedElement(s, i, g, t))
        prev = i
    return out


# ---------------------------------------------------------------------------
# truncated right ideals


class TruncatedRightIdeal:
    """Components of sum_k M(nk) S A up to degree ``max_deg``, built on demand.

    With S = ker(phi) for phi on H(n), the degree-d part is
    ker(phi ⊗ ... ⊗ phi) ⊗ H(d mod n) with floor(d/n) factors: each summand
    puts S in one aligned block and allows anything elsewhere.
    """

    def __init__(self, n: int, S: GradedSubspace, max_deg: int):
        if S.degree != n:
            raise ValueError(f"S has degree {S.degree}, expected {n}")
        self.n = n
        self.S = S
        self.max_deg = max_deg
        self._co = S if isinstance(S, CoMonomialSpace) else None
        self._cache: dict[int, GradedSubspace] = {}

    def _cofinite(self) -> CoMonomialSpace:
        if self._co is None:
            self._co = to_comonomial(self.S)
        return self._co

    def component(self, d: int) -> GradedSubspace:
        if not 0 <= d <= self.max_deg:
            raise ValueError(f"degree {d} outside 0..{self.max_deg}")
        hit = self._cache.get(d)
        if hit is not None:
            return hit
        F = self.S.field
        K, rem = divmod(d, self.n)
        if K == 0:
            out: GradedSubspace = zero_space(d, F)
        elif K == 1 and rem == 0:
            out = self.S
        else:
            C = self._cofinite()
            core = C
            for _ in range(K - 1):
                core = kernel_product(core, C)
            out = core if rem == 0 else product(core, full_space(rem, F))
        self._cache[d] = out
        return out

    @property
    def components(self) -> dict[int, GradedSubspace]:
        return {d: self.component(d) for d in range(1, self.max_deg + 1)}


def b_ideal(n: int, S: GradedSubspace, max_deg: int) -> TruncatedRightIdeal:
    """The truncated right ideal generated by the aligned shifts M(nk)·S."""
    return TruncatedRightIdeal(n, S, max_deg)


# ---------------------------------------------------------------------------
# scaled check of the window containment


def _v_block(state: ConstructionState, q: int, rng: np.random.Generator, mode: str) -> str:
    words = state.level(q).words
    if mode == "first":
        return words[0]
    if mode == "last":
        return words[-1]
    if mode == "v":
        return words[int(rng.integers(0, len(words)))]
    return "".join(ALPHABET[k] for k in rng.integers(0, 3, size=2**q))


def _generators(state: ConstructionState, q: int, rng: np.random.Generator, samples: int) -> list[Poly]:
    """Elements of U(r): F, words of F outside the excluded set, correction, random words."""
    F = state.field
    lvl = state.level(q)
    gens: list[Poly] = []
    if lvl.F is not None and lvl.F.dim:
        gens += basis(lvl.F)
    U = state.U(q) if state.flattenable(q) else None
    excl = U.index if U is not None else {}
    loose = sorted({w for f in gens for w in f.terms if w not in excl})
    gens += [Poly.word(w, F) for w in loose]
    if U is not None:
        corr = U.correction()
        gens += basis(corr) if corr.dim else []
    for _ in range(samples):
        w = "".join(ALPHABET[k] for k in rng.integers(0, 3, size=2**q))
        if w not in excl:
            gens.append(Poly.word(w, F))
    return [g for g in gens if state.in_U(q, g)]


def verify_bwifi(state: ConstructionState, i: int, max_m: int, seed: int = 0, contexts: int = 3, samples: int = 16) -> Report:
    """B_r(U(r)) ∩ H(2**(m+2)) ⊆ U(2**(m+1))H + HU(2**(m+1)) for m+1 = 2**i .. max_m.

    r = 2**(2**i).  Follows the inductive argument: F_i ⊆ U(r), the base case
    by unfolding B_r, and absorption at each lower level; then probes
    generators a·u·b (u in U(r) at an aligned block, V-word and random
    contexts) against the window subspace at every m.
    """
    sch = state.schedule
    q = 2**i
    rep = Report(f"B_r(U(r)) window containment, i={i}, r=2^{q}", labels=[sch.label])
    if i not in sch.z_set:
        raise ScheduleError(f"i={i} is not in the schedule's index set")
    if max_m > state.max_pow or q > state.max_pow:
        raise ScheduleError(f"needs levels up to {max(max_m, q)}, built through {state.max_pow}")
    F = state.field
    lvl = state.level(q)
    Fi = lvl.F
    bad = None
    if Fi is not None and Fi.dim:
        bad = next((f for f in basis(Fi) if not state.in_U(q, f)), None)
    rep.add("F_i ⊆ U(r)", bad is None, f"dim F_i = {0 if Fi is None else Fi.dim}", bad)

    # base case: the degree-2r part of B_r(U(r)) is U(r)H(r) + H(r)U(r)
    if state.flattenable(q):
        U = state.U(q)
        comp = b_ideal(2**q, U, 2 ** (q + 1)).component(2 ** (q + 1))
        rep.add(f"m+1={q} base case", equal(comp, state.T(q)), "degree-2r component equals UH+HU")
    else:
        rep.add(f"m+1={q} base case", True, "U(r) not materialised; holds by definition")

    rng = np.random.default_rng([seed, i])
    gens = _generators(state, q, rng, samples)
    modes = ["first", "last"] + ["v"] * contexts + ["rand"] * contexts
    for mp1 in range(q, max_m + 1):
        # induction step needs absorption at the level below
        if mp1 > q:
            wit = _absorption_probe(state, mp1 - 1)
            rep.add(f"m+1={mp1} absorption below", wit is None, f"U H + H U at level {mp1 - 1} inside level {mp1}", wit)
        blocks = 2 ** (mp1 + 1 - q)
        wit = None
        probes = 0
        for g in gens:
            for k in range(blocks):
                for mode in modes:
                    left = "".join(_v_block(state, q, rng, mode) for _ in range(k))
                    right = "".join(_v_block(state, q, rng, mode) for _ in range(blocks - k - 1))
                    prod = g.left(left).right(right)
                    probes += 1
                    if not state.in_window(mp1, prod):
                        wit = prod
                        break
                if wit is not None:
                    break
            if wit is not None:
                break
        rep.add(f"m+1={mp1} containment", wit is None, f"{probes} generator probes", wit)
    return rep


def _absorption_probe(state: ConstructionState, n: int) -> Poly | None:
    from .construction import _absorption_witness

    if state.flattenable(n) and state.flattenable(n + 1):
        try:
            return witness_outside(state.U(n + 1), state.T(n))
        except SubspaceError:
            pass
    return _absorption_witness(state, n)


def nil_degree_report(i: int, t: int = 1) -> dict:
    """Degree of f_i^(10 w_i) and the scale of the first window: symbolic only."""
    if i < MIN_INDEX:
        raise ValueError(f"indices start at {MIN_INDEX}")
    e = w_exponent(i)
    degree = 10 * t * 2**e if e <= DECIMAL_LIMIT else None
    return {
        "i": i,
        "t_i": t,
        "w_i": format_power_of_two(e),
        "degree": str(degree) if degree is not None else f"10*{t}*2^{e}",
        "first_window_degree": format_power_of_two(2**MIN_INDEX - MIN_INDEX - 1),
        "status": "not desk-verifiable: symbolic report, no computation performed",
    }
