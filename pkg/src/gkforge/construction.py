"""Inductive construction of the complementary pairs V(2**n), U(2**n).

Each level n stores the words of V(2**n) (sorted) and a matrix ``psi`` of
shape ``(d_n, d_{n-1}**2)``.  Together they define a coordinate map

    phi_0(x) = e_0,  phi_0(y) = e_1,  phi_0(z) = 0
    phi_n(ab) = psi_n (phi_{n-1}(a) ⊗ phi_{n-1}(b))     (a, b of degree 2**(n-1))

with ``U(2**n) = ker phi_n`` and ``phi_n`` the identity on the basis words
of V(2**n).  The three growth rules only differ in ``psi``:

* same-window step: identity, V(2**(n+1)) = V(2**n)V(2**n);
* step outside every window, or a window end without F: select two
  concatenation words m1, m2 (the rest of V⊗V becomes part of U);
* window end with F: project onto span{m1, m2} along a complement P that
  contains the V⊗V parts of the F vectors, so that F lands inside U.

The kernel of ``phi_n ⊗ phi_n`` is U H + H U, which is why the absorption
property holds by design.  Where the support of ``phi_n`` is small enough,
U(2**n) is also materialised as a :class:`CoMonomialSpace`.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from typing import Sequence

import numpy as np

from .fields import Field, field_from_json
from .linalg import rank, reduce_rows, rref
from .poly import Poly
from .reports import Report
from .schedule import Schedule
from .subspace import (
    CoMonomialSpace,
    EchelonSpace,
    GradedSubspace,
    MonomialSpace,
    SubspaceError,
    basis,
    complement,
    contains_sub,
    from_json as subspace_from_json,
    full_space,
    intersect,
    kernel_product,
    monomials,
    product,
    sum_spaces,
    to_json as subspace_to_json,
    witness_outside,
    zero_space,
)

__all__ = ["Level", "ConstructionState", "ConstructionError", "build", "verify_seven", "FLAT_CAP", "DEFAULT_MAX_POW"]

FLAT_CAP = 2**17  # largest candidate support for a materialised U(2**n)
DEFAULT_MAX_POW = 6


class ConstructionError(RuntimeError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Level:
    n: int
    case: str  # "base", "case1", "case2", "case3", "case3-z"
    window: int | None
    words: tuple[str, ...]
    psi: np.ndarray | None = dc_field(default=None, compare=False)
    chosen: tuple[str, ...] = ()
    complement: GradedSubspace | None = dc_field(default=None, compare=False)
    F: GradedSubspace | None = dc_field(default=None, compare=False)
    faults: tuple[str, ...] = ()

    @property
    def degree(self) -> int:
        return 2**self.n

    @property
    def dim(self) -> int:
        return len(self.words)

    @property
    def selection(self) -> bool:
        """psi maps each coordinate to at most one unit vector (0/1 entries)."""
        if self.psi is None:
            return True
        P = self.psi
        nz = P != 0
        return bool((nz.sum(axis=1) == 1).all() and (nz.sum(axis=0) <= 1).all() and (P[nz] == 1).all())


class ConstructionState:
    """Built levels 0..max_pow plus lazily computed coordinate caches."""

    def __init__(self, schedule: Schedule, levels: Sequence[Level]):
        self.schedule = schedule
        self.field: Field = schedule.field
        self.levels: tuple[Level, ...] = tuple(levels)
        self._coord_cache: list[dict[str, np.ndarray | None]] = [dict() for _ in self.levels]
        self._flat: dict[int, tuple[tuple[str, ...], np.ndarray] | None] = {}
        self._u_cache: dict[int, CoMonomialSpace] = {}
        self._monomial_chain = []
        chain = True
        for lvl in self.levels:
            chain = chain and lvl.selection
            self._monomial_chain.append(chain)
        self._word_index = [{w: k for k, w in enumerate(lvl.words)} for lvl in self.levels]

    # -- basic accessors -------------------------------------------------
    @property
    def max_pow(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> Level:
        if not 0 <= n <= self.max_pow:
            raise IndexError(f"level {n} not built (max_pow={self.max_pow})")
        return self.levels[n]

    def V(self, n: int) -> MonomialSpace:
        lvl = self.level(n)
        return MonomialSpace(lvl.words, lvl.degree, self.field)

    def dim_V(self, n: int) -> int:
        return self.level(n).dim

    @property
    def provenance(self) -> list[tuple[int, str]]:
        return [(lvl.n, lvl.case) for lvl in self.levels]

    def is_monomial(self, n: int) -> bool:
        """True when U(2**n) is spanned by words (V-words are the only exclusions)."""
        return self._monomial_chain[n]

    # -- coordinates ------------------------------------------------------
    def _phi(self, n: int, w: str) -> np.ndarray | None:
        """phi_n(w) without level-n fault coordinates (None means zero)."""
        cache = self._coord_cache[n]
        if w in cache:
            return cache[w]
        lvl = self.levels[n]
        F = self.field
        v = None
        if self._monomial_chain[n]:
            k = self._word_index[n].get(w)
            if k is not None:
                v = F.zeros((lvl.dim,))
                v[k] = F.one
        else:
            h = len(w) // 2
            a = self._phi(n - 1, w[:h])
            if a is not None:
                b = self._phi(n - 1, w[h:])
                if b is not None:
                    v = F.matmul(lvl.psi, F.reduce(np.kron(a, b)))
                    if not v.any():
                        v = None
        cache[w] = v
        return v

    def word_coords(self, n: int, w: str) -> np.ndarray:
        """phi_n(w) including the extra coordinates of injected faults."""
        lvl = self.level(n)
        if len(w) != lvl.degree:
            raise ValueError(f"word of degree {len(w)} at level {n}")
        F = self.field
        v = self._phi(n, w)
        out = F.zeros((lvl.dim + len(lvl.faults),))
        if v is not None:
            out[: lvl.dim] = v
        for k, fw in enumerate(lvl.faults):
            if fw == w:
                out[lvl.dim + k] = F.one
        return out

    def coords(self, n: int, f: Poly) -> np.ndarray:
        lvl = self.level(n)
        F = self.field
        out = F.zeros((lvl.dim + len(lvl.faults),))
        for w, c in f.terms.items():
            if len(w) != lvl.degree:
                raise ValueError(f"{f} is not homogeneous of degree {lvl.degree}")
            out = F.reduce(out + c * self.word_coords(n, w))
        return out

    def in_U(self, n: int, f: Poly) -> bool:
        return not self.coords(n, f).any()

    def pair_coords(self, n: int, f: Poly) -> np.ndarray:
        """(phi_n ⊗ phi_n)(f) for f of degree 2**(n+1)."""
        lvl = self.level(n)
        F = self.field
        d = lvl.dim + len(lvl.faults)
        h = lvl.degree
        out = F.zeros((d * d,))
        for w, c in f.terms.items():
            if len(w) != 2 * h:
                raise ValueError(f"{f} is not homogeneous of degree {2 * h}")
            a = self.word_coords(n, w[:h])
            if not a.any():
                continue
            b = self.word_coords(n, w[h:])
            if not b.any():
                continue
            out = F.reduce(out + c * F.reduce(np.kron(a, b)))
        return out

    def in_window(self, n: int, f: Poly) -> bool:
        """Membership in U(2**n)H(2**n) + H(2**n)U(2**n)."""
        return not self.pair_coords(n, f).any()

    # -- materialised U ---------------------------------------------------
    def _flat_map(self, n: int):
        """(support, matrix) with phi_n(w) = matrix[:, k] for support word k."""
        if n in self._flat:
            return self._flat[n]
        F = self.field
        lvl = self.levels[n]
        out = None
        if n == 0:
            out = (("x", "y"), F.eye(2))
        elif self._monomial_chain[n]:
            out = (lvl.words, F.eye(lvl.dim))
        else:
            prev = self._flat_map(n - 1)
            if prev is not None and len(prev[0]) ** 2 <= FLAT_CAP:
                S, M = prev
                big = F.matmul(lvl.psi, F.reduce(np.kron(M, M)))
                keep = np.nonzero((big != 0).any(axis=0))[0]
                s = len(S)
                support = tuple(S[k // s] + S[k % s] for k in keep)
                out = (support, big[:, keep])
        self._flat[n] = out
        return out

    def flattenable(self, n: int) -> bool:
        self.level(n)
        return self._flat_map(n) is not None

    def U(self, n: int) -> CoMonomialSpace:
        """U(2**n) as a co-monomial space; raises when its support is too large."""
        if n in self._u_cache:
            return self._u_cache[n]
        lvl = self.level(n)
        flat = self._flat_map(n)
        if flat is None:
            raise SubspaceError(f"U(2^{n}) has too large a support to materialise")
        F = self.field
        support, M = flat
        if lvl.faults:
            extra = [w for w in lvl.faults if w not in set(support)]
            support = tuple(support) + tuple(extra)
            M = np.concatenate([M, F.zeros((M.shape[0], len(extra)))], axis=1)
            rows = F.zeros((len(lvl.faults), len(support)))
            pos = {w: i for i, w in enumerate(support)}
            for k, w in enumerate(lvl.faults):
                rows[k, pos[w]] = F.one
            M = np.concatenate([M, rows], axis=0)
        U = CoMonomialSpace(support, M, lvl.degree, F)
        self._u_cache[n] = U
        return U

    def codim_U(self, n: int) -> int:
        """rank of phi_n (with faults), computed from the recursion alone."""
        return self._image_rank(n) + len(self.level(n).faults)

    def _image_rank(self, n: int) -> int:
        F = self.field
        B = F.eye(2)
        for k in range(1, n + 1):
            lvl = self.levels[k]
            img = F.matmul(F.reduce(np.kron(B, B)), lvl.psi.T)
            B = rref(img, F)[0] if img.size else img
        return B.shape[0]

    def dim_U(self, n: int) -> int:
        return 3 ** self.level(n).degree - self.codim_U(n)

    def T(self, n: int) -> CoMonomialSpace:
        """U(2**n)H(2**n) + H(2**n)U(2**n) as a co-monomial space."""
        U = self.U(n)
        return kernel_product(U, U)

    # -- fault injection --------------------------------------------------
    def with_u_fault(self, n: int, word: str) -> "ConstructionState":
        """A copy where ``word`` is removed from U(2**n) (one extra coordinate).

        Higher levels keep their original coordinates, so the fault breaks
        the direct sum at level n and, when ``word`` lies in
        U(2**(n-1))H + HU(2**(n-1)), absorption into level n.
        """
        lvl = self.level(n)
        if len(word) != lvl.degree:
            raise ValueError(f"fault word must have degree {lvl.degree}")
        levels = list(self.levels)
        levels[n] = replace(lvl, faults=lvl.faults + (word,))
        return ConstructionState(self.schedule, levels)

    # -- persistence ------------------------------------------------------
    def to_json(self) -> dict:
        F = self.field

        def mat(M):
            return None if M is None else [[_coeff(c) for c in row] for row in M]

        levels = []
        for lvl in self.levels:
            levels.append(
                {
                    "n": lvl.n,
                    "case": lvl.case,
                    "window": lvl.window,
                    "words": list(lvl.words),
                    "psi": mat(lvl.psi),
                    "chosen": list(lvl.chosen),
                    "complement": None if lvl.complement is None else subspace_to_json(lvl.complement),
                    "F": None if lvl.F is None else subspace_to_json(lvl.F),
                    "faults": list(lvl.faults),
                }
            )
        return {"format": 1, "schedule": self.schedule.to_json(), "field": F.to_json(), "levels": levels}

    @classmethod
    def from_json(cls, data: dict) -> "ConstructionState":
        if data.get("format") != 1:
            raise ValueError("unsupported state format")
        schedule = Schedule.from_json(data["schedule"])
        F = field_from_json(data.get("field", schedule.field.to_json()))
        levels = []
        for item in data["levels"]:
            psi = None if item["psi"] is None else F.array([[F.parse(str(c)) for c in row] for row in item["psi"]])
            if psi is not None and psi.ndim == 1:
                psi = psi.reshape(len(item["words"]), -1)
            levels.append(
                Level(
                    n=item["n"],
                    case=item["case"],
                    window=item["window"],
                    words=tuple(item["words"]),
                    psi=psi,
                    chosen=tuple(item["chosen"]),
                    complement=None if item["complement"] is None else subspace_from_json(item["complement"]),
                    F=None if item["F"] is None else subspace_from_json(item["F"]),
                    faults=tuple(item.get("faults", [])),
                )
            )
        return cls(schedule, levels)


def _coeff(c):
    from fractions import Fraction

    return str(c) if isinstance(c, Fraction) else int(c)


# ---------------------------------------------------------------------------
# building


def _pick_pair(schedule: Schedule, n: int, count: int) -> tuple[int, int]:
    if schedule.v_choice == "lex":
        return 0, 1
    seed = int(schedule.v_choice.partition(":")[2] or 0)
    rng = np.random.default_rng([seed, n])
    a, b = sorted(int(k) for k in rng.choice(count, size=2, replace=False))
    return a, b


def _select(F: Field, d_next: int, cols: Sequence[int], width: int) -> np.ndarray:
    psi = F.zeros((d_next, width))
    for r, c in enumerate(cols):
        psi[r, c] = F.one
    return psi


def _assert_complement(A: GradedSubspace, C: GradedSubspace, within: GradedSubspace) -> None:
    if intersect(A, C).dim != 0 or sum_spaces(A, C).dim != within.dim:
        raise ConstructionError("chosen complement is not a complement", witness=(A, C))


def _in_span(R: np.ndarray, piv: list[int], v: np.ndarray, F: Field) -> bool:
    if not piv:
        return not v.any()
    return not (reduce_rows(v, R, piv, F) != 0).any()


def _case3_with_F(state: ConstructionState, n: int, i: int, vv: list[str]):
    """psi for a window end that must swallow F_i; returns (psi, (m1, m2), P, F)."""
    sch = state.schedule
    F = state.field
    lvl = state.levels[n]
    deg = 2 * lvl.degree
    Fi = sch.f_provider(i, deg, vv, F)
    if Fi.degree != deg:
        raise ConstructionError(f"F_{i} has degree {Fi.degree}, expected {deg}")
    bound = 2 ** (2 ** (i + 1)) - 2
    if Fi.dim >= bound:
        raise ConstructionError(f"dim F_{i} = {Fi.dim} is not below {bound}")
    N = len(vv)
    fbar = [state.pair_coords(n, f) for f in basis(Fi)] if Fi.dim else []
    P0 = np.array(fbar, dtype=F.dtype).reshape(len(fbar), N) if fbar else F.zeros((0, N))
    R, piv = rref(P0, F) if P0.shape[0] else (P0, [])
    eye = F.eye(N)
    picks: list[int] = []
    for k in range(N):
        if not _in_span(R, piv, eye[k], F):
            picks.append(k)
            R, piv = rref(np.concatenate([R, eye[k][None, :]]), F)
            if len(picks) == 2:
                break
    if len(picks) < 2:
        raise ConstructionError(
            f"case 3 at level {n}: fewer than two concatenation words outside span(F-bar)",
            witness=[vv[k] for k in picks],
        )
    m1, m2 = picks
    P = rref(P0, F)[0] if P0.shape[0] else P0
    for k in range(N):
        if P.shape[0] >= N - 2:
            break
        if k in picks:
            continue
        if not _in_span(R, piv, eye[k], F):
            R, piv = rref(np.concatenate([R, eye[k][None, :]]), F)
            P = np.concatenate([P, eye[k][None, :]])
    if P.shape[0] != N - 2:
        raise ConstructionError(f"case 3 at level {n}: could not complete P", witness=P.shape[0])
    G = np.concatenate([P, eye[m1][None, :], eye[m2][None, :]])
    aug = np.concatenate([G, F.eye(N)], axis=1)
    Rg, pg = rref(aug, F)
    if pg[:N] != list(range(N)):
        raise ConstructionError(f"case 3 at level {n}: P + span(m1, m2) is not everything")
    Ginv = Rg[:, N:]
    psi = np.ascontiguousarray(Ginv[:, N - 2 :].T)
    # projection checks: kills P, identity on m1, m2
    if F.matmul(psi, P.T).any() or (F.matmul(psi, G[N - 2 :].T) != F.eye(2)).any():
        raise ConstructionError(f"case 3 at level {n}: projection check failed")
    Pspace = EchelonSpace(vv, P, deg, F) if P.shape[0] else zero_space(deg, F)
    return psi, (m1, m2), Pspace, Fi


def build(schedule: Schedule | None = None, max_pow: int = DEFAULT_MAX_POW) -> ConstructionState:
    """Construct levels 0..max_pow under ``schedule``."""
    if schedule is None:
        schedule = Schedule()
    if max_pow < 0:
        raise ValueError("max_pow must be non-negative")
    F = schedule.field
    levels = [Level(0, "base", None, ("x", "y"))]
    state = ConstructionState(schedule, levels)
    for n in range(max_pow):
        cur = levels[n]
        vv = [a + b for a in cur.words for b in cur.words]
        vvspace = monomials(vv, 2 * cur.degree, F)
        case, i = schedule.case_for(n)
        d = cur.dim
        if case == 1:
            nxt = Level(n + 1, "case1", i, tuple(vv), F.eye(d * d))
        elif case == 3 and i in schedule.z_set:
            psi, (m1, m2), P, Fi = _case3_with_F(state, n, i, vv)
            chosen = (vv[m1], vv[m2])
            V_next = monomials(chosen, 2 * cur.degree, F)
            _assert_complement(V_next, P, vvspace)
            nxt = Level(n + 1, "case3-z", i, chosen, psi, chosen, P, Fi)
        else:
            a, b = _pick_pair(schedule, n, len(vv))
            chosen = (vv[a], vv[b])
            V_next = monomials(chosen, 2 * cur.degree, F)
            Vbar = complement(V_next, vvspace, "monomial-lex")
            _assert_complement(V_next, Vbar, vvspace)
            nxt = Level(n + 1, "case2" if case == 2 else "case3", i, chosen, _select(F, 2, (a, b), d * d), chosen, Vbar)
        levels.append(nxt)
        state = ConstructionState(schedule, levels)
        # disjointness: phi_{n+1} is the identity on the new V words
        ids = np.array([state.word_coords(n + 1, w) for w in nxt.words], dtype=F.dtype)
        if (ids != F.eye(nxt.dim)).any():
            raise ConstructionError(f"level {n + 1}: V words are not a coordinate basis")
    return state


# ---------------------------------------------------------------------------
# verification


def verify_seven(state: ConstructionState, n: int) -> Report:
    """Check the seven structural conditions at level ``n``.

    Conditions 6 and 7 need level n+1; they are reported as skipped (and
    passing) when n is the top built level.
    """
    sch = state.schedule
    F = state.field
    lvl = state.level(n)
    rep = Report(f"conditions at n={n} (degree {lvl.degree})", labels=[sch.label])
    d = lvl.dim
    w = sch.window_of(n)

    # 1 and 2: dimensions
    if w is None:
        rep.add("cond1", d == 2, f"dim V = {d}, expected 2", None if d == 2 else list(lvl.words))
        rep.add("cond2", True, "n outside every window (vacuous)")
    else:
        i, lo, hi = w
        j = n - lo
        want = 2 ** (2**j)
        rep.add("cond1", True, "n inside a window (vacuous)")
        rep.add("cond2", d == want, f"window i={i}, j={j}: dim V = {d}, expected {want}", None if d == want else list(lvl.words))

    # 3: V spanned by distinct words of the right degree
    ok3 = len(set(lvl.words)) == d and all(len(u) == lvl.degree for u in lvl.words)
    rep.add("cond3", ok3, f"V spanned by {d} words")

    # 4: F_i ⊆ U(2**(2**i))
    if lvl.F is not None and lvl.case == "case3-z":
        bad = next((f for f in basis(lvl.F) if not state.in_U(n, f)), None) if lvl.F.dim else None
        rep.add("cond4", bad is None, f"F_{lvl.window} (dim {lvl.F.dim}) inside U", bad)
    else:
        rep.add("cond4", True, "no F at this level (vacuous)")

    # 5: direct sum
    total = 3**lvl.degree
    if state.flattenable(n):
        U = state.U(n)
        V = state.V(n)
        cap = intersect(V, U)
        dims = V.dim + U.dim
        if cap.dim:
            rep.add("cond5", False, "V ∩ U is nonzero", basis(cap)[0])
        elif dims != total:
            rep.add("cond5", False, f"dim V + dim U = {dims} != 3^{lvl.degree}", witness_outside(sum_spaces(V, U), full_space(lvl.degree, F)))
        else:
            rep.add("cond5", True, f"dim V + dim U = 3^{lvl.degree}, V ∩ U = 0")
    else:
        img = np.array([state.word_coords(n, u) for u in lvl.words], dtype=F.dtype)
        injective = rank(img, F) == d
        codim = state.codim_U(n)
        if not injective:
            rep.add("cond5", False, "V words are dependent modulo U", list(lvl.words))
        elif codim != d:
            rep.add("cond5", False, f"codim U = {codim} != dim V = {d}", lvl.faults[0] if lvl.faults else None)
        else:
            rep.add("cond5", True, "structural: V maps isomorphically onto the coordinates")

    if n == state.max_pow:
        rep.add("cond6", True, "top level (skipped)")
        rep.add("cond7", True, "top level (skipped)")
        return rep

    nxt = state.level(n + 1)
    # 6: U H + H U ⊆ U(2**(n+1))
    if state.flattenable(n) and state.flattenable(n + 1) and len(state.U(n).excluded) ** 2 <= FLAT_CAP:
        wit = witness_outside(state.U(n + 1), state.T(n))
        rep.add("cond6", wit is None, "U H + H U inside the next U", wit)
    else:
        wit = _absorption_witness(state, n)
        rep.add("cond6", wit is None, "structural: only fault coordinates can break absorption", wit)

    # 7: V(2**(n+1)) ⊆ V V
    Vn = state.V(n)
    ok7 = contains_sub(product(Vn, Vn), state.V(n + 1))
    rep.add("cond7", ok7, f"{nxt.dim} next V words among {d * d} concatenations")
    return rep


def _absorption_witness(state: ConstructionState, n: int) -> Poly | None:
    """An element of U H + H U (level n) outside U at level n+1, if any.

    Without faults at level n+1 absorption holds because U(2**(n+1)) is the
    kernel of a map factoring through phi_n ⊗ phi_n.  A fault word ab breaks it
    exactly when delta_a or delta_b is not a functional of phi_n.
    """
    F = state.field
    for w in state.level(n + 1).faults:
        h = len(w) // 2
        a, b = w[:h], w[h:]
        for half, other, left in ((a, b, True), (b, a, False)):
            u = _u_element_hitting(state, n, half)
            if u is None:
                continue
            g = Poly.word(other, F)
            cand = u * g if left else g * u
            if not state.in_U(n + 1, cand):
                return cand
    return None


def _u_element_hitting(state: ConstructionState, n: int, word: str) -> Poly | None:
    """Some u in U(2**n) with nonzero coefficient on ``word`` (None if none exists)."""
    F = state.field
    if not state.word_coords(n, word).any():
        return Poly.word(word, F)
    if not state.flattenable(n):
        return None
    U = state.U(n)
    corr = U.correction()
    k = corr.index.get(word)
    if k is None:
        return None
    col = corr.rows[:, k]
    hits = np.nonzero(col != 0)[0]
    if not len(hits):
        return None
    r = corr.rows[int(hits[0])]
    return Poly({corr.support[j]: r[j] for j in np.nonzero(r != 0)[0]}, F)
