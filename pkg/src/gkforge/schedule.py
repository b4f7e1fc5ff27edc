"""Construction parameters: window set, index set Z, F-providers, tie-breaks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .fields import GF2, Field, field_from_json
from .poly import Poly, parse_poly
from .subspace import GradedSubspace, span, zero_space
from .words import ALPHABET

__all__ = [
    "Schedule",
    "ScheduleError",
    "FProvider",
    "no_provider",
    "RandomProvider",
    "FileProvider",
    "provider_from_spec",
    "DEFAULT_ONSET",
]

DEFAULT_ONSET = 5

# provider(i, degree, frame_words, field) -> subspace of H(degree)
FProvider = Callable[[int, int, Sequence[str], Field], GradedSubspace]


class ScheduleError(ValueError):
    pass


def no_provider(i: int, degree: int, frame: Sequence[str], field: Field) -> GradedSubspace:
    return zero_space(degree, field)


class RandomProvider:
    """Mock F: ``dim`` random sparse vectors of the requested degree.

    Each vector mixes a few words of the V⊗V frame (so the V⊗V part is
    nontrivial) with a few uniformly random words.  Half of the vectors also
    touch one of the first four frame words, which are the ones a lex choice
    of m1, m2 would otherwise take, so the projection step is exercised in
    earnest.  Seeded per (seed, i).
    """

    def __init__(self, seed: int = 0, dim: int = 100):
        self.seed = seed
        self.dim = dim

    def __call__(self, i: int, degree: int, frame: Sequence[str], field: Field) -> GradedSubspace:
        rng = np.random.default_rng([self.seed, i])
        bound = 2 ** (2 ** (i + 1)) - 2
        count = max(0, min(self.dim, bound - 1))
        vectors = []
        for _ in range(count):
            terms: dict[str, object] = {}
            if len(frame) and rng.random() < 0.5:
                terms[frame[int(rng.integers(0, min(4, len(frame))))]] = field.random_nonzero(rng)
            for _ in range(int(rng.integers(1, 4))):
                if len(frame):
                    terms[frame[int(rng.integers(0, len(frame)))]] = field.random_nonzero(rng)
            for _ in range(int(rng.integers(0, 3))):
                w = "".join(ALPHABET[k] for k in rng.integers(0, 3, size=degree))
                terms[w] = field.random_nonzero(rng)
            vectors.append(Poly(terms, field))
        return span(vectors, degree, field)

    def __repr__(self) -> str:
        return f"random:{self.seed}"


class FileProvider:
    """F read from JSON: ``{"<i>": ["poly text", ...], ...}``."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.data = json.loads(self.path.read_text())

    def __call__(self, i: int, degree: int, frame: Sequence[str], field: Field) -> GradedSubspace:
        texts = self.data.get(str(i), [])
        vectors = [parse_poly(t, field) for t in texts]
        return span(vectors, degree, field) if vectors else zero_space(degree, field)

    def __repr__(self) -> str:
        return f"file:{self.path}"


def provider_from_spec(spec: str) -> FProvider:
    if spec in ("none", "", None):
        return no_provider
    kind, _, arg = spec.partition(":")
    if kind == "random":
        seed, _, dim = arg.partition(",")
        return RandomProvider(int(seed or 0), int(dim) if dim else 100)
    if kind == "file":
        return FileProvider(arg)
    raise ScheduleError(f"unknown f_provider {spec!r}")


@dataclass(frozen=True)
class Schedule:
    """Which levels grow (windows), which windows consume an F, and tie-breaks.

    Windows are ``[2**i - i - 1, 2**i - 1]`` for ``i >= onset``.  Onsets below
    5 are "scaled mode" and are labelled as scaled constants.
    """

    field: Field = GF2
    onset: int = DEFAULT_ONSET
    z_set: frozenset = frozenset()
    provider_spec: str = "none"
    v_choice: str = "lex"
    f_provider: FProvider = dc_field(default=no_provider, compare=False, repr=False)

    def __post_init__(self):
        if self.onset < 2:
            raise ScheduleError("window onset must be at least 2")
        bad = [i for i in self.z_set if i < self.onset]
        if bad:
            raise ScheduleError(f"z_set entries below the onset: {sorted(bad)}")
        if self.v_choice != "lex" and not self.v_choice.startswith("random:"):
            raise ScheduleError(f"unknown v_choice {self.v_choice!r}")
        if self.f_provider is no_provider and self.provider_spec != "none":
            object.__setattr__(self, "f_provider", provider_from_spec(self.provider_spec))

    @property
    def scaled(self) -> bool:
        return self.onset < DEFAULT_ONSET

    @property
    def label(self) -> str:
        return "scaled constants" if self.scaled else "default constants"

    def windows(self, upto: int) -> list[tuple[int, int, int]]:
        """(i, lo, hi) for every window with lo <= upto."""
        out = []
        i = self.onset
        while 2**i - i - 1 <= upto:
            out.append((i, 2**i - i - 1, 2**i - 1))
            i += 1
        return out

    def window_of(self, n: int) -> tuple[int, int, int] | None:
        for w in self.windows(n):
            if w[1] <= n <= w[2]:
                return w
        return None

    def in_windows(self, n: int) -> bool:
        return self.window_of(n) is not None

    def case_for(self, n: int) -> tuple[int, int | None]:
        """Which construction case builds level n+1 from level n.

        1: n and n+1 lie in the same window; 2: n lies in no window;
        3: n ends a window (n = 2**i - 1).  Adjacent windows (onset 2 gives
        [1,3] and [4,7]) therefore still trigger case 3 at each window end.
        """
        w = self.window_of(n)
        if w is None:
            return 2, None
        i, lo, hi = w
        if n < hi:
            return 1, i
        return 3, i

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "onset": self.onset,
            "z_set": sorted(self.z_set),
            "v_choice": self.v_choice,
            "f_provider": self.provider_spec,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Schedule":
        return cls(
            field=field_from_json(data.get("field", {"kind": "gf", "p": 2})),
            onset=int(data.get("onset", DEFAULT_ONSET)),
            z_set=frozenset(int(i) for i in data.get("z_set", [])),
            provider_spec=data.get("f_provider", "none"),
            v_choice=data.get("v_choice", "lex"),
        )

    @classmethod
    def scaled_default(cls, onset: int = 2, seed: int = 0, dim: int = 100, field: Field = GF2) -> "Schedule":
        """Onset-2 style schedule with Z = {onset} and a random mock F."""
        return cls(field=field, onset=onset, z_set=frozenset({onset}), provider_spec=f"random:{seed},{dim}")
