"""Graded subspace machinery for a nil algebra of finite Gelfand-Kirillov dimension.

The package builds, at small degrees, the complementary subspaces U(2**n) and
V(2**n) of the free algebra K<x, y, z>, the block subspaces assembled from
them, and the homogeneous ideal E they define, and checks their structural
properties exactly.
"""

from __future__ import annotations

from .fields import GF, GF2, Rationals
from .poly import Poly, parse_poly, poly_mul, homogeneous_components
from .words import word_index, word_from_index
from .schedule import Schedule
from .construction import build, verify_seven, ConstructionState

__all__ = [
    "GF",
    "GF2",
    "Rationals",
    "Poly",
    "parse_poly",
    "poly_mul",
    "homogeneous_components",
    "word_index",
    "word_from_index",
    "Schedule",
    "build",
    "verify_seven",
    "ConstructionState",
]

__version__ = "0.1.0"
