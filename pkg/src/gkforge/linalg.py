"""Row reduction over a :class:`~gkforge.fields.Field`.

All routines take and return numpy matrices in the field's array format.
Pivots are always chosen in the leftmost available column, so the reduced
row echelon form of a matrix is unique.
"""

from __future__ import annotations

import numpy as np

from .fields import Field

__all__ = ["rref", "rank", "nullspace", "reduce_rows", "row_space_contains", "row_space_intersection"]


def rref(M: np.ndarray, F: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M``; returns the nonzero rows and pivots."""
    A = np.array(M, dtype=F.dtype, copy=True)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    A = F.reduce(A)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    binary = getattr(F, "p", None) == 2
    while r < rows:
        nz = A[r:] != 0
        colmask = nz.any(axis=0)
        if not colmask.any():
            break
        c = int(np.argmax(colmask))
        i = r + int(np.argmax(nz[:, c]))
        if i != r:
            A[[r, i]] = A[[i, r]]
        if not binary:
            A[r] = F.reduce(A[r] * F.inv(A[r, c]))
        col = A[:, c] != 0
        col[r] = False
        if col.any():
            if binary:
                A[col] ^= A[r]
            else:
                A[col] = F.reduce(A[col] - np.outer(A[col, c], A[r]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M: np.ndarray, F: Field) -> int:
    if M.size == 0:
        return 0
    return len(rref(M, F)[1])


def nullspace(M: np.ndarray, F: Field) -> np.ndarray:
    """Basis (as rows) of ``{v : M v = 0}``, one row per free column."""
    cols = M.shape[1]
    if M.shape[0] == 0:
        return F.eye(cols)
    R, pivots = rref(M, F)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    N = F.zeros((len(free), cols))
    if free:
        N[np.arange(len(free)), free] = F.one
        if pivots:
            N[:, pivots] = (-R[:, free]).T
    return F.reduce(N)


def reduce_rows(V: np.ndarray, R: np.ndarray, pivots: list[int], F: Field) -> np.ndarray:
    """Reduce each row of ``V`` modulo the row space of the RREF matrix ``R``."""
    V = F.reduce(np.array(V, dtype=F.dtype, copy=True))
    if V.ndim == 1:
        V = V[None, :]
    for i, p in enumerate(pivots):
        coef = V[:, p].copy()
        hit = coef != 0
        if hit.any():
            V[hit] = F.reduce(V[hit] - np.outer(coef[hit], R[i]))
    return V


def row_space_contains(R: np.ndarray, pivots: list[int], V: np.ndarray, F: Field) -> np.ndarray:
    """Boolean mask: which rows of ``V`` lie in the row space of RREF ``R``."""
    residue = reduce_rows(V, R, pivots, F)
    return ~(residue != 0).any(axis=1)


def row_space_intersection(A: np.ndarray, B: np.ndarray, F: Field) -> np.ndarray:
    """Basis (RREF rows) of rowspace(A) ∩ rowspace(B), Zassenhaus style."""
    cols = A.shape[1] if A.ndim == 2 else B.shape[1]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return F.zeros((0, cols))
    top = np.concatenate([A, A], axis=1)
    bottom = np.concatenate([B, F.zeros(B.shape)], axis=1)
    R, pivots = rref(np.concatenate([top, bottom], axis=0), F)
    keep = [i for i, p in enumerate(pivots) if p >= cols]
    if not keep:
        return F.zeros((0, cols))
    return rref(R[keep, cols:], F)[0]
