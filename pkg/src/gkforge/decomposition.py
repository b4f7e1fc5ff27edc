"""Block subspaces W(j), S(j), R(j), Q(j) from the binary expansion of j.

Write ``j = 2**p_0 + ... + 2**p_n`` with ``p_0 < ... < p_n``.  W(j) is the
product of the V(2**p_k) in ascending order, Q(j) the same in descending
order.  S(j) is the sum of ``H(t_k) U(2**p_k) H(m_k)`` (blocks ascending),
R(j) the sum of ``H(m_k) U(2**p_k) H(t_k)`` (blocks descending).  A sum of
"U in block k, anything elsewhere" is the kernel of the tensor product of
the block coordinate maps, so S(j) and R(j) are co-monomial with excluded
set W(j) resp. Q(j) and a Kronecker product of constraint matrices.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .construction import ConstructionState
from .poly import Poly
from .reports import Report
from .subspace import (
    CoMonomialSpace,
    GradedSubspace,
    MonomialSpace,
    basis,
    full_space,
    intersect,
    kernel_product,
    monomials,
    product,
    sum_spaces,
    witness_outside,
    zero_space,
)

__all__ = [
    "BinaryDecomposition",
    "BlockSummand",
    "DecompositionTables",
    "bits_of",
    "w_of",
    "q_of",
    "s_of",
    "r_of",
    "s_summands",
    "r_summands",
    "verify_direct_sum",
    "verify_recursion",
    "verify_absorption",
    "dims_row",
    "split_points",
    "QN_BOUND",
]


def QN_BOUND(n: int) -> int:
    """Upper bound 3**17 * n**9 for dim Q(n)."""
    return 3**17 * n**9


def bits_of(j: int) -> list[int]:
    if j < 1:
        raise ValueError("j must be positive")
    return [p for p in range(j.bit_length()) if j >> p & 1]


@dataclass(frozen=True)
class BinaryDecomposition:
    j: int

    @property
    def bits(self) -> list[int]:
        return bits_of(self.j)

    @property
    def prefix(self) -> list[int]:
        """t_k: sum of the blocks below p_k."""
        out, acc = [], 0
        for p in self.bits:
            out.append(acc)
            acc += 2**p
        return out

    @property
    def suffix(self) -> list[int]:
        """m_k: sum of the blocks above p_k."""
        return [self.j - t - 2**p for t, p in zip(self.prefix, self.bits)]


@dataclass(frozen=True)
class BlockSummand:
    """``H(left) U(2**p) H(right)``, one summand of S(j) or R(j)."""

    left: int
    p: int
    right: int

    @property
    def degree(self) -> int:
        return self.left + 2**self.p + self.right

    def contains(self, state: ConstructionState, f: Poly) -> bool:
        """Group f by outer context; each middle combination must lie in U."""
        groups: dict[tuple[str, str], dict[str, object]] = {}
        size = 2**self.p
        for w, c in f.terms.items():
            if len(w) != self.degree:
                raise ValueError(f"{f} is not of degree {self.degree}")
            key = (w[: self.left], w[self.left + size :])
            groups.setdefault(key, {})[w[self.left : self.left + size]] = c
        return all(state.in_U(self.p, Poly(mid, state.field)) for mid in groups.values())

    def __str__(self) -> str:
        parts = []
        if self.left:
            parts.append(f"H({self.left})")
        parts.append(f"U({2**self.p})")
        if self.right:
            parts.append(f"H({self.right})")
        return "".join(parts)


def _check_range(state: ConstructionState, j: int) -> list[int]:
    bits = bits_of(j)
    if bits[-1] > state.max_pow:
        raise ValueError(f"j={j} needs level {bits[-1]}, built through {state.max_pow}")
    return bits


def w_of(state: ConstructionState, j: int) -> MonomialSpace:
    bits = _check_range(state, j)
    return reduce(product, [state.V(p) for p in bits])


def q_of(state: ConstructionState, j: int) -> MonomialSpace:
    bits = _check_range(state, j)
    return reduce(product, [state.V(p) for p in reversed(bits)])


def _block_kernel(state: ConstructionState, exps: list[int]) -> CoMonomialSpace:
    return reduce(kernel_product, [state.U(p) for p in exps])


def s_of(state: ConstructionState, j: int) -> CoMonomialSpace:
    return _block_kernel(state, _check_range(state, j))


def r_of(state: ConstructionState, j: int) -> CoMonomialSpace:
    return _block_kernel(state, list(reversed(_check_range(state, j))))


def s_summands(state: ConstructionState, j: int) -> list[BlockSummand]:
    _check_range(state, j)
    D = BinaryDecomposition(j)
    return [BlockSummand(t, p, m) for p, t, m in zip(D.bits, D.prefix, D.suffix)]


def r_summands(state: ConstructionState, j: int) -> list[BlockSummand]:
    _check_range(state, j)
    D = BinaryDecomposition(j)
    return [BlockSummand(m, p, t) for p, t, m in zip(D.bits, D.prefix, D.suffix)]


class DecompositionTables:
    """Fill-once cache of W, S, R, Q keyed by j for one construction state."""

    def __init__(self, state: ConstructionState):
        self.state = state
        self._lock = threading.Lock()
        self._cache: dict[tuple[str, int], GradedSubspace] = {}

    def _get(self, kind: str, j: int) -> GradedSubspace:
        key = (kind, j)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        fn = {"W": w_of, "Q": q_of, "S": s_of, "R": r_of}[kind]
        value = fn(self.state, j)
        with self._lock:
            return self._cache.setdefault(key, value)

    def W(self, j: int) -> GradedSubspace:
        return self._get("W", j)

    def Q(self, j: int) -> GradedSubspace:
        return self._get("Q", j)

    def S(self, j: int) -> GradedSubspace:
        return self._get("S", j)

    def R(self, j: int) -> GradedSubspace:
        return self._get("R", j)


def dims_row(state: ConstructionState, j: int) -> dict:
    W, Q = w_of(state, j), q_of(state, j)
    S, R = s_of(state, j), r_of(state, j)
    return {"j": j, "dimW": W.dim, "dimS": S.dim, "dimR": R.dim, "dimQ": Q.dim, "3^j": 3**j}


def _direct_sum_checks(rep: Report, name: str, small: GradedSubspace, big: GradedSubspace, j: int) -> None:
    cap = intersect(small, big)
    if cap.dim:
        rep.add(name, False, f"intersection has dim {cap.dim}", basis(cap)[0])
        return
    total = small.dim + big.dim
    if total != 3**j:
        wit = witness_outside(sum_spaces(small, big), full_space(j, small.field))
        rep.add(name, False, f"dimensions add to {total}, not 3^{j}", wit)
        return
    rep.add(name, True, f"{small.dim} + {big.dim} = 3^{j}, trivial intersection")


def verify_direct_sum(state: ConstructionState, j: int, *, W=None, S=None, R=None, Q=None) -> Report:
    """S(j) ⊕ W(j) = H(j) and R(j) ⊕ Q(j) = H(j).

    Keyword overrides replace a computed table entry (used for fault injection).
    """
    rep = Report(f"direct sums at j={j}", labels=[state.schedule.label])
    W = w_of(state, j) if W is None else W
    S = s_of(state, j) if S is None else S
    R = r_of(state, j) if R is None else R
    Q = q_of(state, j) if Q is None else Q
    _direct_sum_checks(rep, "S+W", W, S, j)
    _direct_sum_checks(rep, "R+Q", Q, R, j)
    return rep


def split_points(j: int) -> list[int]:
    return list(range(1, len(bits_of(j))))


def verify_recursion(state: ConstructionState, j: int, t: int) -> Report:
    """R(j) = R(m)H(m') + H(m)R(m') with m' the sum of the t lowest blocks."""
    rep = Report(f"recursion at j={j}, t={t}", labels=[state.schedule.label])
    bits = bits_of(j)
    if not 0 < t < len(bits):
        rep.add("split", True, "no valid split point (vacuous)")
        return rep
    low = sum(2**p for p in bits[:t])
    high = j - low
    lhs = r_of(state, j)
    rhs = kernel_product(r_of(state, high), r_of(state, low))
    a = witness_outside(rhs, lhs)
    b = witness_outside(lhs, rhs)
    rep.add("R(j) ⊆ R(m)H(m')+H(m)R(m')", a is None, f"m={high}, m'={low}", a)
    rep.add("R(m)H(m')+H(m)R(m') ⊆ R(j)", b is None, f"m={high}, m'={low}", b)
    return rep


def _one_step(state: ConstructionState, A: CoMonomialSpace, B: CoMonomialSpace, right: bool) -> Poly | None:
    one = full_space(1, state.field)
    moved = product(A, one) if right else product(one, A)
    return witness_outside(B, moved)


def verify_absorption(state: ConstructionState, j: int, t: int, *, R=None, S=None) -> Report:
    """R(j)H(t) ⊆ R(j+t) and H(t)S(j) ⊆ S(j+t), as a chain of one-letter steps.

    ``R``/``S`` may map degrees to replacement spaces (fault injection).
    """
    rep = Report(f"absorption at j={j}, t={t}", labels=[state.schedule.label])
    R = R or {}
    S = S or {}

    def getR(k):
        return R.get(k) or r_of(state, k)

    def getS(k):
        return S.get(k) or s_of(state, k)

    for label, get, right in (("R(j)H(t) ⊆ R(j+t)", getR, True), ("H(t)S(j) ⊆ S(j+t)", getS, False)):
        wit = None
        for s in range(t):
            wit = _one_step(state, get(j + s), get(j + s + 1), right)
            if wit is not None:
                rep.add(label, False, f"step {j + s} -> {j + s + 1}", wit)
                break
        if wit is None:
            rep.add(label, True, f"{t} one-letter steps")
    return rep
