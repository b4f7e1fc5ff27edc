"""Subspaces of a single graded component H(n).

Three representations are used, chosen so that nothing of size 3**n is
ever materialised unless asked for:

``MonomialSpace``
    span of a finite set of words.
``EchelonSpace``
    a finite support of words plus reduced row echelon rows over it.
``CoMonomialSpace``
    every word outside a finite ``excluded`` set, plus those vectors
    supported on ``excluded`` that are killed by a constraint matrix.  The
    constraint rows (kept in RREF) form the annihilator of the correction
    space; :meth:`CoMonomialSpace.correction` returns the correction itself
    as an :class:`EchelonSpace`.

Columns of every matrix are indexed by words sorted lexicographically, so
the pivot of an echelon row is its smallest word.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .fields import GF2, Field, field_from_json
from .linalg import nullspace, rank, reduce_rows, row_space_intersection, rref
from .poly import Poly
from .words import ALPHABET, words_of_degree

__all__ = [
    "GradedSubspace",
    "MonomialSpace",
    "EchelonSpace",
    "CoMonomialSpace",
    "SubspaceError",
    "span",
    "zero_space",
    "full_space",
    "monomials",
    "sum_spaces",
    "intersect",
    "product",
    "kernel_product",
    "complement",
    "contains",
    "contains_sub",
    "witness_outside",
    "equal",
    "to_finite",
    "to_comonomial",
    "basis",
    "random_element",
    "to_json",
    "from_json",
    "FINITE_CAP",
]

FINITE_CAP = 3**9  # largest H(n) we are willing to enumerate word by word


class SubspaceError(ValueError):
    pass


class GradedSubspace:
    degree: int
    field: Field
    kind: str = ""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def finite(self) -> bool:
        return not isinstance(self, CoMonomialSpace)

    def __contains__(self, f: Poly) -> bool:
        return contains(self, f)

    def __le__(self, other: "GradedSubspace") -> bool:
        return contains_sub(other, self)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedSubspace) and equal(self, other)

    __hash__ = None  # type: ignore[assignment]


class MonomialSpace(GradedSubspace):
    kind = "monomials"

    def __init__(self, words: Iterable[str], degree: int, field: Field = GF2):
        ws = sorted(set(words))
        for w in ws:
            if len(w) != degree:
                raise SubspaceError(f"word {w!r} is not of degree {degree}")
        self.words = tuple(ws)
        self.wordset = frozenset(ws)
        self.degree = degree
        self.field = field

    @property
    def dim(self) -> int:
        return len(self.words)

    def __repr__(self) -> str:
        shown = ", ".join(self.words[:6]) + (", ..." if len(self.words) > 6 else "")
        return f"MonomialSpace(deg={self.degree}, dim={self.dim}, {{{shown}}})"


class EchelonSpace(GradedSubspace):
    kind = "echelon"

    def __init__(self, support: Sequence[str], rows: np.ndarray, degree: int, field: Field = GF2, *, reduced: bool = False):
        support = list(support)
        if sorted(support) != support or len(set(support)) != len(support):
            order = sorted(set(support))
            if len(order) != len(support):
                raise SubspaceError("support words must be distinct")
            perm = [support.index(w) for w in order]
            rows = rows[:, perm]
            support = order
        if rows.size == 0:
            rows = field.zeros((0, len(support)))
        if not reduced:
            rows, _ = rref(rows, field)
        used = (rows != 0).any(axis=0) if rows.shape[0] else np.zeros(len(support), dtype=bool)
        if not used.all():
            rows = rows[:, used]
            support = [w for w, u in zip(support, used) if u]
        for w in support:
            if len(w) != degree:
                raise SubspaceError(f"word {w!r} is not of degree {degree}")
        self.support = tuple(support)
        self.index = {w: i for i, w in enumerate(self.support)}
        self.rows = rows
        self.pivots = [int(np.argmax(r != 0)) for r in rows]
        self.degree = degree
        self.field = field

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def __repr__(self) -> str:
        return f"EchelonSpace(deg={self.degree}, dim={self.dim}, support={len(self.support)})"


class CoMonomialSpace(GradedSubspace):
    kind = "comonomial"

    def __init__(self, excluded: Sequence[str], constraints: np.ndarray | None, degree: int, field: Field = GF2, *, reduced: bool = False):
        excluded = list(excluded)
        if constraints is None or constraints.size == 0:
            constraints = field.zeros((0, len(excluded)))
        if sorted(excluded) != excluded:
            order = sorted(range(len(excluded)), key=excluded.__getitem__)
            excluded = [excluded[i] for i in order]
            constraints = constraints[:, order]
        if len(set(excluded)) != len(excluded):
            raise SubspaceError("excluded words must be distinct")
        for w in excluded[:1] + excluded[-1:]:
            if len(w) != degree:
                raise SubspaceError(f"word {w!r} is not of degree {degree}")
        if not reduced:
            constraints, _ = rref(constraints, field)
        self.excluded = tuple(excluded)
        self._index: dict[str, int] | None = None
        self.constraints = constraints
        self.degree = degree
        self.field = field

    @property
    def index(self) -> dict[str, int]:
        if self._index is None:
            self._index = {w: i for i, w in enumerate(self.excluded)}
        return self._index

    @property
    def dim(self) -> int:
        return 3**self.degree - self.constraints.shape[0]

    @property
    def codim(self) -> int:
        return self.constraints.shape[0]

    def correction(self) -> EchelonSpace:
        """Vectors supported on the excluded words that lie in the space."""
        N = nullspace(self.constraints, self.field) if self.excluded else self.field.zeros((0, 0))
        return EchelonSpace(self.excluded, N, self.degree, self.field)

    def is_monomial(self) -> bool:
        """True when the space is spanned by words (constraints are unit rows)."""
        C = self.constraints
        return bool(((C != 0).sum(axis=1) == 1).all())

    def __repr__(self) -> str:
        return f"CoMonomialSpace(deg={self.degree}, codim={self.codim}, excluded={len(self.excluded)})"


# ---------------------------------------------------------------------------
# constructors


def zero_space(n: int, field: Field = GF2) -> MonomialSpace:
    return MonomialSpace((), n, field)


def full_space(n: int, field: Field = GF2) -> CoMonomialSpace:
    """H(n) itself."""
    return CoMonomialSpace((), None, n, field)


def monomials(words: Iterable[str], n: int, field: Field = GF2) -> MonomialSpace:
    return MonomialSpace(words, n, field)


def _matrix(vectors: Sequence[Poly], field: Field) -> tuple[list[str], np.ndarray]:
    support = sorted({w for v in vectors for w in v.terms})
    idx = {w: i for i, w in enumerate(support)}
    M = field.zeros((len(vectors), len(support)))
    for r, v in enumerate(vectors):
        for w, c in v.terms.items():
            M[r, idx[w]] = c
    return support, M


def span(vectors: Sequence[Poly], n: int, field: Field | None = None) -> GradedSubspace:
    """Linear span of homogeneous degree-``n`` polynomials."""
    vectors = list(vectors)
    if field is None:
        field = vectors[0].field if vectors else GF2
    for v in vectors:
        if not v.is_homogeneous(n):
            raise SubspaceError(f"{v} is not homogeneous of degree {n}")
    nonzero = [v for v in vectors if v]
    if all(len(v) == 1 for v in nonzero):
        return MonomialSpace((w for v in nonzero for w in v.terms), n, field)
    support, M = _matrix(nonzero, field)
    return EchelonSpace(support, M, n, field)


# ---------------------------------------------------------------------------
# helpers


def _check_same(A: GradedSubspace, B: GradedSubspace) -> None:
    if A.degree != B.degree:
        raise SubspaceError(f"degree mismatch: {A.degree} vs {B.degree}")
    if A.field != B.field:
        raise SubspaceError(f"field mismatch: {A.field!r} vs {B.field!r}")


def _finite_rows(A: GradedSubspace) -> tuple[tuple[str, ...], np.ndarray]:
    if isinstance(A, MonomialSpace):
        return A.words, A.field.eye(len(A.words))
    if isinstance(A, EchelonSpace):
        return A.support, A.rows
    raise SubspaceError("expected a finite representation")


def _embed(support: Sequence[str], M: np.ndarray, frame: Sequence[str], field: Field) -> np.ndarray:
    """Re-express the columns of ``M`` (over ``support``) in ``frame``."""
    pos = {w: i for i, w in enumerate(frame)}
    out = field.zeros((M.shape[0], len(frame)))
    if len(support):
        out[:, [pos[w] for w in support]] = M
    return out


def _restrict(support: Sequence[str], M: np.ndarray, frame: Sequence[str], field: Field) -> np.ndarray:
    """Columns of ``M`` for the words of ``frame`` (zero where absent)."""
    pos = {w: i for i, w in enumerate(support)}
    out = field.zeros((M.shape[0], len(frame)))
    hits = [(j, pos[w]) for j, w in enumerate(frame) if w in pos]
    if hits:
        dst, src = zip(*hits)
        out[:, list(dst)] = M[:, list(src)]
    return out


def _from_rows(support: Sequence[str], M: np.ndarray, n: int, field: Field) -> GradedSubspace:
    R, _ = rref(M, field) if M.shape[0] else (M, [])
    if R.shape[0] and ((R != 0).sum(axis=1) == 1).all():
        cols = np.argmax(R != 0, axis=1)
        return MonomialSpace((support[c] for c in cols), n, field)
    if R.shape[0] == 0:
        return zero_space(n, field)
    return EchelonSpace(support, R, n, field, reduced=True)


def _vector_on(f: Poly, frame: Sequence[str], index: dict[str, int], field: Field) -> np.ndarray:
    v = field.zeros((len(frame),))
    for w, c in f.terms.items():
        j = index.get(w)
        if j is not None:
            v[j] = c
    return v


def _check_poly(A: GradedSubspace, f: Poly) -> None:
    if not f.is_homogeneous(A.degree):
        raise SubspaceError(f"{f} is not homogeneous of degree {A.degree}")
    if f.field != A.field:
        raise SubspaceError("field mismatch")


# ---------------------------------------------------------------------------
# membership


def contains(A: GradedSubspace, f: Poly) -> bool:
    """Is ``f`` an element of ``A``?"""
    _check_poly(A, f)
    if not f:
        return True
    if isinstance(A, MonomialSpace):
        return all(w in A.wordset for w in f.terms)
    if isinstance(A, EchelonSpace):
        if any(w not in A.index for w in f.terms):
            return False
        v = _vector_on(f, A.support, A.index, A.field)
        return not (reduce_rows(v, A.rows, A.pivots, A.field) != 0).any()
    if isinstance(A, CoMonomialSpace):
        if A.codim == 0:
            return True
        v = _vector_on(f, A.excluded, A.index, A.field)
        return not (A.field.matmul(A.constraints, v) != 0).any()
    raise TypeError(type(A))


def _finite_missing(A: GradedSubspace, support: Sequence[str], M: np.ndarray) -> int | None:
    """Index of the first row of ``M`` (over ``support``) not in ``A``."""
    F = A.field
    if M.shape[0] == 0:
        return None
    if isinstance(A, MonomialSpace):
        outside = [j for j, w in enumerate(support) if w not in A.wordset]
        if not outside:
            return None
        bad = (M[:, outside] != 0).any(axis=1)
        return int(np.argmax(bad)) if bad.any() else None
    if isinstance(A, EchelonSpace):
        frame = sorted(set(support) | set(A.support))
        R = _embed(A.support, A.rows, frame, F)
        V = _embed(support, M, frame, F)
        piv = [int(np.argmax(r != 0)) for r in R]
        bad = (reduce_rows(V, R, piv, F) != 0).any(axis=1)
        return int(np.argmax(bad)) if bad.any() else None
    if isinstance(A, CoMonomialSpace):
        if A.codim == 0:
            return None
        V = _restrict(support, M, A.excluded, F)
        bad = (F.matmul(V, A.constraints.T) != 0).any(axis=1)
        return int(np.argmax(bad)) if bad.any() else None
    raise TypeError(type(A))


def _row_poly(support: Sequence[str], row: np.ndarray, field: Field) -> Poly:
    return Poly({support[j]: row[j] for j in np.nonzero(row != 0)[0]}, field)


def witness_outside(A: GradedSubspace, B: GradedSubspace) -> Poly | None:
    """An element of ``B`` that is not in ``A``, or ``None`` when ``B ⊆ A``."""
    _check_same(A, B)
    F = A.field
    if B.finite:
        support, M = _finite_rows(B)
        k = _finite_missing(A, support, M)
        return None if k is None else _row_poly(support, M[k], F)
    assert isinstance(B, CoMonomialSpace)
    if isinstance(A, CoMonomialSpace):
        frame = sorted(set(A.excluded) | set(B.excluded))
        C = _embed(A.excluded, A.constraints, frame, F)
        D = _embed(B.excluded, B.constraints, frame, F)
        if D.shape[0]:
            R, piv = rref(D, F)
        else:
            R, piv = D, []
        residue = reduce_rows(C, R, piv, F) if C.shape[0] else C
        bad = (residue != 0).any(axis=1) if residue.shape[0] else np.zeros(0, dtype=bool)
        if not bad.any():
            return None
        c = residue[int(np.argmax(bad))]
        f = int(np.argmax(c != 0))
        v = F.zeros((len(frame),))
        v[f] = F.one
        for i, p in enumerate(piv):
            v[p] = -R[i, f]
        return _row_poly(frame, F.reduce(v), F)
    # B is cofinite, A finite: only possible when H(n) is small
    if 3**B.degree > FINITE_CAP:
        if A.dim >= B.dim:
            raise SubspaceError("cannot compare a large cofinite space with a finite one")
        for w in _sample_outside(B, A):
            return Poly.word(w, F)
        raise SubspaceError("no witness found")
    return witness_outside(A, to_finite(B))


def _sample_outside(B: CoMonomialSpace, A: GradedSubspace):
    excluded = set(B.excluded)
    held = set(A.words if isinstance(A, MonomialSpace) else A.support)  # type: ignore[union-attr]
    for w in words_of_degree(B.degree):
        if w not in excluded and w not in held:
            yield w


def contains_sub(A: GradedSubspace, B: GradedSubspace) -> bool:
    """Is ``B`` a subspace of ``A``?"""
    _check_same(A, B)
    if B.finite or isinstance(A, CoMonomialSpace):
        return witness_outside(A, B) is None
    if B.dim > A.dim:
        return False
    return witness_outside(A, B) is None


def equal(A: GradedSubspace, B: GradedSubspace) -> bool:
    _check_same(A, B)
    return A.dim == B.dim and contains_sub(A, B)


# ---------------------------------------------------------------------------
# conversions


def to_finite(A: GradedSubspace, cap: int = FINITE_CAP) -> GradedSubspace:
    """A Monomial/Echelon representation (only for small cofinite spaces)."""
    if A.finite:
        return A
    assert isinstance(A, CoMonomialSpace)
    if 3**A.degree > cap:
        raise SubspaceError(f"H({A.degree}) too large to enumerate (cap {cap})")
    excl = set(A.excluded)
    free = [w for w in words_of_degree(A.degree) if w not in excl]
    corr = A.correction()
    if corr.dim == 0:
        return MonomialSpace(free, A.degree, A.field)
    frame = sorted(set(free) | set(corr.support))
    F = A.field
    M = np.concatenate([_embed(free, F.eye(len(free)), frame, F), _embed(corr.support, corr.rows, frame, F)])
    return EchelonSpace(frame, M, A.degree, F)


def to_comonomial(A: GradedSubspace, cap: int = FINITE_CAP) -> CoMonomialSpace:
    """Cofinite form of a finite space: excluded = all of M(n)."""
    if isinstance(A, CoMonomialSpace):
        return A
    if 3**A.degree > cap:
        raise SubspaceError(f"H({A.degree}) too large to enumerate (cap {cap})")
    F = A.field
    frame = list(words_of_degree(A.degree))
    support, M = _finite_rows(A)
    B = _embed(support, M, frame, F)
    ann = nullspace(B, F) if B.shape[0] else F.eye(len(frame))
    return CoMonomialSpace(frame, ann, A.degree, F)


def basis(A: GradedSubspace) -> list[Poly]:
    """Basis polynomials of a finite space (or of a small cofinite one)."""
    A = to_finite(A)
    support, M = _finite_rows(A)
    return [_row_poly(support, r, A.field) for r in M]


# ---------------------------------------------------------------------------
# lattice operations


def sum_spaces(A: GradedSubspace, B: GradedSubspace) -> GradedSubspace:
    """A + B."""
    _check_same(A, B)
    F, n = A.field, A.degree
    if isinstance(A, MonomialSpace) and isinstance(B, MonomialSpace):
        return MonomialSpace(A.wordset | B.wordset, n, F)
    if A.finite and B.finite:
        sa, Ma = _finite_rows(A)
        sb, Mb = _finite_rows(B)
        frame = sorted(set(sa) | set(sb))
        M = np.concatenate([_embed(sa, Ma, frame, F), _embed(sb, Mb, frame, F)])
        return _from_rows(frame, M, n, F)
    if not A.finite and not B.finite:
        assert isinstance(A, CoMonomialSpace) and isinstance(B, CoMonomialSpace)
        common = sorted(set(A.excluded) & set(B.excluded))
        ca = _projected_constraints(A, common)
        cb = _projected_constraints(B, common)
        return CoMonomialSpace(common, row_space_intersection(ca, cb, F), n, F, reduced=True)
    if A.finite:
        A, B = B, A
    assert isinstance(A, CoMonomialSpace)
    if A.codim == 0:
        return A
    sb, Mb = _finite_rows(B)
    Bx = _restrict(sb, Mb, A.excluded, F)
    lam = nullspace(F.matmul(Bx, A.constraints.T), F) if Bx.shape[0] else F.eye(A.codim)
    return CoMonomialSpace(A.excluded, F.matmul(lam, A.constraints), n, F)


def _projected_constraints(A: CoMonomialSpace, frame: Sequence[str]) -> np.ndarray:
    """Annihilator of the coordinate projection of ``A`` onto span(frame)."""
    F = A.field
    keep = set(frame)
    inside = [A.index[w] for w in frame]
    outside = [i for i, w in enumerate(A.excluded) if w not in keep]
    C = A.constraints
    if not outside:
        return C[:, inside]
    lam = nullspace(C[:, outside].T, F) if C.shape[0] else F.zeros((0, 0))
    if lam.shape[0] == 0:
        return F.zeros((0, len(frame)))
    return F.matmul(lam, C[:, inside])


def intersect(A: GradedSubspace, B: GradedSubspace) -> GradedSubspace:
    """A ∩ B."""
    _check_same(A, B)
    F, n = A.field, A.degree
    if isinstance(A, MonomialSpace) and isinstance(B, MonomialSpace):
        return MonomialSpace(A.wordset & B.wordset, n, F)
    if not A.finite and not B.finite:
        assert isinstance(A, CoMonomialSpace) and isinstance(B, CoMonomialSpace)
        frame = sorted(set(A.excluded) | set(B.excluded))
        C = np.concatenate([_embed(A.excluded, A.constraints, frame, F), _embed(B.excluded, B.constraints, frame, F)])
        return CoMonomialSpace(frame, C, n, F)
    if A.finite and B.finite:
        sa, Ma = _finite_rows(A)
        sb, Mb = _finite_rows(B)
        frame = sorted(set(sa) | set(sb))
        inter = row_space_intersection(_embed(sa, Ma, frame, F), _embed(sb, Mb, frame, F), F)
        return _from_rows(frame, inter, n, F)
    if A.finite:
        A, B = B, A
    assert isinstance(A, CoMonomialSpace)
    sb, Mb = _finite_rows(B)
    if A.codim == 0:
        return B
    G = _restrict(sb, Mb, A.excluded, F)
    lam = nullspace(F.matmul(A.constraints, G.T), F)
    if lam.shape[0] == 0:
        return zero_space(n, F)
    return _from_rows(sb, F.matmul(lam, Mb), n, F)


def product(A: GradedSubspace, B: GradedSubspace, cap: int = FINITE_CAP) -> GradedSubspace:
    """Span of all products a*b, a in A, b in B (degree A.degree + B.degree)."""
    if A.field != B.field:
        raise SubspaceError("field mismatch")
    F, n = A.field, A.degree + B.degree
    if isinstance(A, MonomialSpace) and isinstance(B, MonomialSpace):
        return MonomialSpace((u + v for u in A.words for v in B.words), n, F)
    if A.finite and B.finite:
        sa, Ma = _finite_rows(A)
        sb, Mb = _finite_rows(B)
        if Ma.shape[0] == 0 or Mb.shape[0] == 0:
            return zero_space(n, F)
        support = [u + v for u in sa for v in sb]
        return _from_rows(support, F.reduce(np.kron(Ma, Mb)), n, F)
    if isinstance(A, CoMonomialSpace) and isinstance(B, CoMonomialSpace) and (A.codim == 0 or B.codim == 0):
        # U*H(b) and H(a)*U are cofinite: the kernel of (phi (x) id)
        if B.codim == 0 and A.codim == 0:
            return full_space(n, F)
        if B.codim == 0 and len(A.excluded) * 3**B.degree <= cap:
            right = list(words_of_degree(B.degree))
            return CoMonomialSpace([u + v for u in A.excluded for v in right], np.kron(A.constraints, F.eye(len(right))), n, F)
        if A.codim == 0 and len(B.excluded) * 3**A.degree <= cap:
            left = list(words_of_degree(A.degree))
            return CoMonomialSpace([u + v for u in left for v in B.excluded], np.kron(F.eye(len(left)), B.constraints), n, F)
    if 3**A.degree <= cap and 3**B.degree <= cap and 3**n <= cap * 9:
        return product(to_finite(A, cap), to_finite(B, cap), cap)
    raise SubspaceError(f"product of {A!r} and {B!r} is not representable at this size")


def kernel_product(A: CoMonomialSpace, B: CoMonomialSpace) -> CoMonomialSpace:
    """``A*H(b) + H(a)*B`` for cofinite A ⊆ H(a), B ⊆ H(b).

    If A = ker(phi) and B = ker(psi) this is ker(phi ⊗ psi), so the result is
    cofinite with excluded set X×Y and constraints kron(C_A, C_B).
    """
    if not isinstance(A, CoMonomialSpace) or not isinstance(B, CoMonomialSpace):
        A, B = to_comonomial(A), to_comonomial(B)
    if A.field != B.field:
        raise SubspaceError("field mismatch")
    F = A.field
    excluded = [u + v for u in A.excluded for v in B.excluded]
    C = F.reduce(np.kron(A.constraints, B.constraints))
    return CoMonomialSpace(excluded, C, A.degree + B.degree, F, reduced=True)


def complement(A: GradedSubspace, within: GradedSubspace, rule: str = "lex") -> GradedSubspace:
    """A complement C of A inside ``within``: A ∩ C = 0 and A + C = within.

    ``rule="lex"`` (monomial-lex) takes the set difference when both spaces
    are monomial; otherwise, and under ``"echelon-greedy"``, basis vectors of
    ``within`` are added in pivot (lexicographic) order whenever independent.
    """
    if rule not in ("lex", "monomial-lex", "echelon-greedy"):
        raise ValueError(f"unknown complement rule {rule!r}")
    _check_same(A, within)
    witness = witness_outside(within, A)
    if witness is not None:
        raise SubspaceError(f"A is not contained in within: {witness}")
    F, n = A.field, A.degree
    if isinstance(A, MonomialSpace) and isinstance(within, MonomialSpace):
        return MonomialSpace(within.wordset - A.wordset, n, F)
    if isinstance(within, CoMonomialSpace):
        if not isinstance(A, CoMonomialSpace):
            within = to_finite(within)
        else:
            frame = monomials(A.excluded, n, F)
            return complement(intersect(A, frame), intersect(within, frame), rule)
    sw, Mw = _finite_rows(within)
    sa, Ma = _finite_rows(A)
    frame = sorted(set(sw) | set(sa))
    cur = _embed(sa, Ma, frame, F)
    R, piv = rref(cur, F) if cur.shape[0] else (cur, [])
    chosen = []
    for row in _embed(sw, Mw, frame, F):
        res = reduce_rows(row, R, piv, F)[0] if len(piv) else row
        if (res != 0).any():
            chosen.append(row)
            R, piv = rref(np.concatenate([R, row[None, :]]) if len(piv) else row[None, :], F)
    if not chosen:
        return zero_space(n, F)
    return _from_rows(frame, np.array(chosen, dtype=F.dtype), n, F)


# ---------------------------------------------------------------------------
# sampling


def random_element(A: GradedSubspace, rng: np.random.Generator, terms: int = 3) -> Poly:
    """A random element; cofinite spaces mix random free words with the correction."""
    F = A.field
    acc = Poly.zero(F)
    if A.finite:
        for v in basis(A) if A.dim <= 4096 else []:
            if rng.random() < min(1.0, terms / max(A.dim, 1)):
                acc = acc + v.scale(F.random_nonzero(rng))
        return acc
    assert isinstance(A, CoMonomialSpace)
    excl = A.index
    for _ in range(int(rng.integers(0, terms + 1))):
        w = "".join(ALPHABET[i] for i in rng.integers(0, 3, size=A.degree))
        if w not in excl:
            acc = acc + Poly.word(w, F).scale(F.random_nonzero(rng))
    corr = A.correction()
    if corr.dim:
        for _ in range(int(rng.integers(0, terms + 1))):
            r = corr.rows[int(rng.integers(0, corr.dim))]
            acc = acc + _row_poly(corr.support, r, F).scale(F.random_nonzero(rng))
    return acc


# ---------------------------------------------------------------------------
# JSON


def _coeff_json(c):
    return str(c) if isinstance(c, Fraction) else int(c)


def _rows_json(support: Sequence[str], M: np.ndarray) -> list:
    return [[[support[j], _coeff_json(r[j])] for j in np.nonzero(r != 0)[0]] for r in M]


def to_json(A: GradedSubspace) -> dict:
    """Versioned JSON form: {format, degree, repr, words, excluded, rows, field}."""
    out = {"format": 1, "degree": A.degree, "repr": A.kind, "field": A.field.to_json(), "words": [], "excluded": [], "rows": []}
    if isinstance(A, MonomialSpace):
        out["words"] = list(A.words)
    elif isinstance(A, EchelonSpace):
        out["words"] = list(A.support)
        out["rows"] = _rows_json(A.support, A.rows)
    else:
        assert isinstance(A, CoMonomialSpace)
        corr = A.correction()
        out["excluded"] = list(A.excluded)
        out["rows"] = _rows_json(corr.support, corr.rows)
    return out


def from_json(data: dict) -> GradedSubspace:
    if data.get("format") != 1:
        raise ValueError(f"unsupported subspace format {data.get('format')!r}")
    F = field_from_json(data.get("field", {"kind": "gf", "p": 2}))
    n = int(data["degree"])
    vectors = [Poly({w: F.parse(str(c)) for w, c in row}, F) for row in data.get("rows", [])]
    kind = data["repr"]
    if kind == "monomials":
        return MonomialSpace(data["words"], n, F)
    if kind == "echelon":
        support, M = _matrix(vectors, F)
        return EchelonSpace(support, M, n, F) if vectors else zero_space(n, F)
    if kind == "comonomial":
        excluded = sorted(data["excluded"])
        idx = {w: i for i, w in enumerate(excluded)}
        M = F.zeros((len(vectors), len(excluded)))
        for r, v in enumerate(vectors):
            for w, c in v.terms.items():
                M[r, idx[w]] = c
        ann = nullspace(M, F) if M.shape[0] else F.eye(len(excluded))
        return CoMonomialSpace(excluded, ann, n, F)
    raise ValueError(f"unknown representation {kind!r}")
