"""Dense reference engine over all 3**n coordinates of H(n).

Used only as an oracle in tests and in the small-window E cross-check.
Over GF(2) rows are Python ints used as bitsets (bit k = word of index k);
other fields fall back to sparse dict rows on the same coordinates.
"""

from __future__ import annotations

from .fields import Field
from .poly import Poly
from .subspace import CoMonomialSpace, GradedSubspace, basis
from .words import word_from_index, word_index, words_of_degree

__all__ = ["DenseSpace", "DENSE_MAX_DEGREE"]

DENSE_MAX_DEGREE = 10


class DenseSpace:
    """An echelon basis over the full coordinate set of H(n)."""

    def __init__(self, n: int, field: Field):
        if n > DENSE_MAX_DEGREE:
            raise ValueError(f"dense engine is capped at degree {DENSE_MAX_DEGREE}")
        self.n = n
        self.field = field
        self.binary = getattr(field, "p", None) == 2
        self.pivots: dict[int, object] = {}

    # vectors are ints (GF(2)) or dicts col -> coeff
    def vector(self, f: Poly):
        if not f.is_homogeneous(self.n):
            raise ValueError(f"{f} is not of degree {self.n}")
        if self.binary:
            v = 0
            for w in f.terms:
                v |= 1 << word_index(w)
            return v
        return {word_index(w): c for w, c in f.terms.items()}

    def _reduce(self, v):
        if self.binary:
            while v:
                p = (v & -v).bit_length() - 1
                row = self.pivots.get(p)
                if row is None:
                    return v, p
                v ^= row
            return 0, None
        F = self.field
        v = dict(v)
        while v:
            p = min(v)
            row = self.pivots.get(p)
            if row is None:
                return v, p
            c = v[p]
            for k, a in row.items():
                nv = F(v.get(k, 0) - c * a)
                if nv == 0:
                    v.pop(k, None)
                else:
                    v[k] = nv
        return {}, None

    def add(self, v) -> bool:
        """Insert a vector; returns True when it was independent."""
        v, p = self._reduce(v)
        if p is None:
            return False
        if not self.binary:
            inv = self.field.inv(v[p])
            v = {k: self.field(a * inv) for k, a in v.items()}
        self.pivots[p] = v
        return True

    def add_poly(self, f: Poly) -> bool:
        return self.add(self.vector(f))

    def contains(self, f: Poly) -> bool:
        return self.contains_vector(self.vector(f))

    def contains_vector(self, v) -> bool:
        return self._reduce(v)[1] is None

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis(self) -> list[Poly]:
        out = []
        for row in self.pivots.values():
            if self.binary:
                terms = {word_from_index(self.n, k): 1 for k in range(row.bit_length()) if row >> k & 1}
            else:
                terms = {word_from_index(self.n, k): c for k, c in row.items()}
            out.append(Poly(terms, self.field))
        return out

    @classmethod
    def from_polys(cls, polys, n: int, field: Field) -> "DenseSpace":
        D = cls(n, field)
        for f in polys:
            D.add_poly(f)
        return D

    @classmethod
    def from_subspace(cls, A: GradedSubspace) -> "DenseSpace":
        D = cls(A.degree, A.field)
        if isinstance(A, CoMonomialSpace):
            excl = A.index
            for w in words_of_degree(A.degree):
                if w not in excl:
                    D.add_poly(Poly.word(w, A.field))
            corr = A.correction()
            for f in basis(corr) if corr.dim else []:
                D.add_poly(f)
        else:
            for f in basis(A):
                D.add_poly(f)
        return D

    def sum(self, other: "DenseSpace") -> "DenseSpace":
        out = DenseSpace(self.n, self.field)
        for row in list(self.pivots.values()) + list(other.pivots.values()):
            out.add(row)
        return out

    def intersect_dim(self, other: "DenseSpace") -> int:
        return self.dim + other.dim - self.sum(other).dim
