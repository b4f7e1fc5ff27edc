"""Sparse noncommutative polynomials in K<x, y, z>."""

from __future__ import annotations

import re
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping

from .fields import GF2, Field, Rationals
from .words import check_word

__all__ = ["Poly", "parse_poly", "homogeneous_components", "poly_mul"]


class Poly:
    """A finite map word -> nonzero coefficient.

    Instances are treated as immutable; arithmetic returns new objects.
    """

    __slots__ = ("terms", "field")

    def __init__(self, terms: Mapping[str, object] | Iterable[tuple[str, object]] = (), field: Field = GF2):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[str, object] = {}
        for w, c in items:
            check_word(w)
            acc[w] = field(acc.get(w, 0) + field(c))
        self.field = field
        self.terms = {w: c for w, c in acc.items() if c != 0}

    @classmethod
    def word(cls, w: str, field: Field = GF2) -> "Poly":
        return cls({w: 1}, field)

    @classmethod
    def zero(cls, field: Field = GF2) -> "Poly":
        return cls({}, field)

    def _new(self, terms: dict[str, object]) -> "Poly":
        out = object.__new__(Poly)
        out.field = self.field
        out.terms = terms
        return out

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        terms = dict(self.terms)
        for w, c in other.terms.items():
            v = F(terms.get(w, 0) + c)
            if v == 0:
                terms.pop(w, None)
            else:
                terms[w] = v
        return self._new(terms)

    def __neg__(self) -> "Poly":
        F = self.field
        return self._new({w: F(-c) for w, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        F = self.field
        c = F(c)
        if c == 0:
            return self._new({})
        return self._new({w: F(c * v) for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def left(self, w: str) -> "Poly":
        """``w * self`` for a word ``w``."""
        return self._new({w + u: c for u, c in self.terms.items()})

    def right(self, w: str) -> "Poly":
        """``self * w`` for a word ``w``."""
        return self._new({u + w: c for u, c in self.terms.items()})

    # -- inspection -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.field == other.field and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, w: str):
        return self.terms.get(w, self.field.zero)

    def support(self) -> list[str]:
        return sorted(self.terms, key=lambda w: (len(w), w))

    @property
    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    @property
    def degree(self) -> int:
        if not self.terms:
            raise ValueError("the zero polynomial has no degree")
        return max(self.degrees)

    def is_homogeneous(self, n: int | None = None) -> bool:
        degs = self.degrees
        if not degs:
            return True
        return len(degs) == 1 and (n is None or n in degs)

    def components(self) -> list[tuple[int, "Poly"]]:
        return homogeneous_components(self)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, {self.field!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in self.support():
            c = self.terms[w]
            neg = isinstance(c, Fraction) and c < 0
            mag = -c if neg else c
            body = w if mag == 1 and w else (f"{mag}*{w}" if w else f"{mag}")
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)


def poly_mul(f: Poly, g: Poly) -> Poly:
    """Product in the free algebra: bilinear extension of word concatenation."""
    f._check(g)
    F = f.field
    acc: dict[str, object] = defaultdict(int)
    for u, a in f.terms.items():
        for v, b in g.terms.items():
            acc[u + v] = F(acc[u + v] + a * b)
    return f._new({w: c for w, c in acc.items() if c != 0})


def homogeneous_components(f: Poly) -> list[tuple[int, Poly]]:
    """The nonzero homogeneous components of ``f``, sorted by degree."""
    parts: dict[int, dict[str, object]] = defaultdict(dict)
    for w, c in f.terms.items():
        parts[len(w)][w] = c
    return [(n, f._new(parts[n])) for n in sorted(parts)]


_TERM = re.compile(r"([+-])?(\d+(?:/\d+)?)?(\*)?([xyz]*)")


def parse_poly(text: str, field: Field = GF2) -> Poly:
    """Parse ``"2*zz + z - xy"``-style input.

    Whitespace is ignored and ``*`` between coefficient and word is optional.
    A bare coefficient denotes a constant term.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise SyntaxError("empty polynomial text")
    if s == "0":
        return Poly.zero(field)
    pos = 0
    terms: list[tuple[str, object]] = []
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, coef, star, word = m.groups()
        if m.end() == pos or (coef is None and not word):
            raise SyntaxError(f"cannot parse term at offset {pos} in {text!r}")
        if sign is None and pos > 0:
            raise SyntaxError(f"missing operator at offset {pos} in {text!r}")
        if star and (coef is None or not word):
            raise SyntaxError(f"dangling '*' at offset {pos} in {text!r}")
        if coef is not None and "/" in coef and not isinstance(field, Rationals):
            raise ValueError(f"rational coefficient {coef!r} is not valid in {field!r}")
        c = field.parse(coef) if coef is not None else field.one
        if sign == "-":
            c = field(-c)
        terms.append((word, c))
        pos = m.end()
    return Poly(terms, field)
