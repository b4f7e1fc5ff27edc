"""Coefficient fields: prime fields GF(p) and the rationals.

Field elements are plain Python values (``int`` residues for GF(p),
``fractions.Fraction`` for Q).  Matrices are numpy arrays: ``int64`` for
GF(p) with entries kept in ``[0, p)``, ``object`` arrays of Fractions for Q.
"""

from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

__all__ = ["Field", "GF", "Rationals", "field_from_json", "GF2"]

_MAX_PRIME = 2**31  # products of two residues must fit in int64


class Field:
    """Common interface; see :class:`GF` and :class:`Rationals`."""

    zero = 0
    one = 1
    dtype: object = object

    def __call__(self, value):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def zeros(self, shape) -> np.ndarray:
        return self.reduce(np.zeros(shape, dtype=self.dtype))

    def eye(self, n: int) -> np.ndarray:
        return self.array(np.eye(n, dtype=np.int64))

    def array(self, data) -> np.ndarray:
        raise NotImplementedError

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        return self.reduce(A @ B)

    def random_nonzero(self, rng: np.random.Generator):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


class GF(Field):
    """The prime field with ``p`` elements."""

    dtype = np.int64

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or p >= _MAX_PRIME or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"GF(p) needs a prime p < 2**31, got {p}")
        self.p = p

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def __call__(self, value) -> int:
        if isinstance(value, Fraction):
            return self(value.numerator) * self.inv(self(value.denominator)) % self.p
        return int(value) % self.p

    def parse(self, text: str) -> int:
        text = text.strip()
        if not re.fullmatch(r"[+-]?\d+", text):
            raise ValueError(f"invalid coefficient for {self!r}: {text!r}")
        return int(text) % self.p

    def inv(self, a) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return np.mod(arr.astype(np.int64, copy=False), self.p)

    def matmul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        if self.p < 2**20 and A.shape[-1] < 2**22:
            return np.mod(A @ B, self.p)
        return self.reduce(np.mod(A.astype(object) @ B.astype(object), self.p))

    def array(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        if arr.size and any(isinstance(v, Fraction) for v in arr.flat):
            arr = np.vectorize(self.__call__, otypes=[object])(arr)
        return np.mod(arr.astype(np.int64), self.p)

    def random_nonzero(self, rng: np.random.Generator) -> int:
        return int(rng.integers(1, self.p))

    def to_json(self) -> dict:
        return {"kind": "gf", "p": self.p}


class Rationals(Field):
    """The field Q, with exact ``Fraction`` arithmetic."""

    dtype = object
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("QQ")

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def parse(self, text: str) -> Fraction:
        text = text.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise ValueError(f"invalid rational coefficient: {text!r}")
        value = Fraction(text)
        return value

    def inv(self, a) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def array(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        return np.vectorize(Fraction, otypes=[object])(arr) if arr.size else arr

    def zeros(self, shape) -> np.ndarray:
        arr = np.empty(shape, dtype=object)
        arr.fill(Fraction(0))
        return arr

    def random_nonzero(self, rng: np.random.Generator) -> Fraction:
        num = int(rng.integers(1, 10)) * (1 if rng.random() < 0.5 else -1)
        return Fraction(num, int(rng.integers(1, 6)))

    def to_json(self) -> dict:
        return {"kind": "q"}


GF2 = GF(2)


def field_from_json(spec: dict) -> Field:
    kind = spec.get("kind", "gf")
    if kind == "gf":
        return GF(spec.get("p", 2))
    if kind in ("q", "rational", "rationals"):
        return Rationals()
    raise ValueError(f"unknown field kind {kind!r}")
