"""Words (monomials) over the alphabet x < y < z.

A word is a plain ``str`` over ``"xyz"``; the empty string is the unit
monomial.  Since ``'x' < 'y' < 'z'`` in code-point order, Python string
comparison of two words of the same degree is the lexicographic order of
the free monoid, which is also the order of their base-3 indices.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator

ALPHABET = "xyz"
_DIGIT = {"x": 0, "y": 1, "z": 2}

__all__ = [
    "ALPHABET",
    "word_index",
    "word_from_index",
    "words_of_degree",
    "check_word",
    "component_dimension",
]


def check_word(w: str) -> str:
    if not isinstance(w, str) or any(c not in _DIGIT for c in w):
        raise ValueError(f"not a word over {ALPHABET!r}: {w!r}")
    return w


def word_index(w: str) -> int:
    """Base-3 value of ``w`` with x=0, y=1, z=2 (most significant letter first)."""
    k = 0
    for c in check_word(w):
        k = 3 * k + _DIGIT[c]
    return k


def word_from_index(n: int, k: int) -> str:
    """Inverse of :func:`word_index` on words of degree ``n``."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    if not 0 <= k < 3**n:
        raise IndexError(f"index {k} out of range for degree {n} (need 0 <= k < 3**{n})")
    letters = []
    for _ in range(n):
        k, d = divmod(k, 3)
        letters.append(ALPHABET[d])
    return "".join(reversed(letters))


def words_of_degree(n: int, alphabet: str = ALPHABET) -> Iterator[str]:
    """All words of length ``n`` in lexicographic order."""
    for letters in product(alphabet, repeat=n):
        yield "".join(letters)


def component_dimension(n: int) -> int:
    """dim H(n) = 3**n, exact for any n."""
    return 3**n
