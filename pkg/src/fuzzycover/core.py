"""Finite-universe fuzzy sets and fuzzy coverings.

Everything downstream (neighborhood operators, approximations, the
decision pipeline) works on these two values:

* :class:`FuzzySet` — a membership vector over a fixed, ordered universe;
* :class:`FuzzyCovering` — a non-empty family of fuzzy sets whose
  pointwise maximum is 1 at every element.

All values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyFamily,
    EmptyMember,
    NotACovering,
    RangeError,
    UniverseMismatch,
)

#: Tolerance for membership equality in internal algebra.
EPS_EQ = 1e-9

#: Tolerance used when comparing against 4-decimal published tables.
REPORT_TOL = 5e-4


@dataclass(frozen=True)
class Universe:
    """Ordered, duplicate-free list of element labels.

    The label order is fixed and defines the indexing of every membership
    vector built over this universe.
    """

    labels: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.labels) == 0:
            raise ValueError("universe needs at least one element")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("universe labels must be unique")
        object.__setattr__(self, "labels", tuple(str(v) for v in self.labels))
        object.__setattr__(
            self, "_index", {v: i for i, v in enumerate(self.labels)}
        )

    @classmethod
    def of_size(cls, n: int, prefix: str = "x") -> "Universe":
        return cls(tuple(f"{prefix}{i + 1}" for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not an element of this universe")


def _as_memberships(values: Iterable[float]) -> np.ndarray:
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=float)
    if arr.ndim != 1:
        raise ValueError("memberships must be a flat vector")
    return arr


class FuzzySet:
    """Membership vector over a finite universe, entries in [0, 1]."""

    __slots__ = ("universe", "memberships")

    def __init__(self, universe: Universe, memberships: Iterable[float]):
        arr = _as_memberships(memberships)
        if arr.shape[0] != universe.n:
            raise ValueError(
                f"expected {universe.n} memberships, got {arr.shape[0]}"
            )
        if np.any(arr < -EPS_EQ) or np.any(arr > 1 + EPS_EQ):
            bad = arr[(arr < -EPS_EQ) | (arr > 1 + EPS_EQ)][0]
            raise RangeError(f"membership {bad} outside [0, 1]")
        arr = np.clip(arr, 0.0, 1.0)
        arr.setflags(write=False)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "memberships", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FuzzySet is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, universe: Universe, value: float) -> "FuzzySet":
        return cls(universe, np.full(universe.n, float(value)))

    @classmethod
    def empty(cls, universe: Universe) -> "FuzzySet":
        return cls.constant(universe, 0.0)

    @classmethod
    def whole(cls, universe: Universe) -> "FuzzySet":
        return cls.constant(universe, 1.0)

    @classmethod
    def singleton(cls, universe: Universe, label: str) -> "FuzzySet":
        v = np.zeros(universe.n)
        v[universe.index(label)] = 1.0
        return cls(universe, v)

    @classmethod
    def crisp(cls, universe: Universe, labels: Iterable[str]) -> "FuzzySet":
        v = np.zeros(universe.n)
        for lab in labels:
            v[universe.index(lab)] = 1.0
        return cls(universe, v)

    # -- access --------------------------------------------------------

    def __call__(self, label: str) -> float:
        return float(self.memberships[self.universe.index(label)])

    def __iter__(self):
        return iter(self.memberships)

    def __repr__(self):
        pairs = ", ".join(
            f"{m:g}/{lab}" for m, lab in zip(self.memberships, self.universe.labels)
        )
        return f"FuzzySet({pairs})"

    def __eq__(self, other):
        if not isinstance(other, FuzzySet):
            return NotImplemented
        return self.universe == other.universe and np.array_equal(
            self.memberships, other.memberships
        )

    __hash__ = None

    def approx_equals(self, other: "FuzzySet", tol: float = EPS_EQ) -> bool:
        _require_same_universe(self, other)
        return bool(np.max(np.abs(self.memberships - other.memberships)) <= tol)


def _require_same_universe(*sets: FuzzySet) -> Universe:
    u = sets[0].universe
    for s in sets[1:]:
        if s.universe != u:
            raise UniverseMismatch("fuzzy sets live on different universes")
    return u


def pointwise_union(sets: Sequence[FuzzySet]) -> FuzzySet:
    """Pointwise maximum of a non-empty list of fuzzy sets."""
    if not sets:
        raise EmptyFamily("union of an empty list")
    u = _require_same_universe(*sets)
    return FuzzySet(u, np.max([s.memberships for s in sets], axis=0))


def pointwise_intersection(sets: Sequence[FuzzySet]) -> FuzzySet:
    """Pointwise minimum of a non-empty list of fuzzy sets."""
    if not sets:
        raise EmptyFamily("intersection of an empty list")
    u = _require_same_universe(*sets)
    return FuzzySet(u, np.min([s.memberships for s in sets], axis=0))


def complement(s: FuzzySet) -> FuzzySet:
    """Standard negation, result(x) = 1 - s(x)."""
    return FuzzySet(s.universe, 1.0 - s.memberships)


def sigma_cardinality(s: FuzzySet) -> float:
    """Sigma-count |s|: the sum of all membership degrees."""
    return float(np.sum(s.memberships))


def is_subset(a: FuzzySet, b: FuzzySet, tol: float = EPS_EQ) -> bool:
    """Pointwise order: a(x) <= b(x) + tol for every x."""
    _require_same_universe(a, b)
    return bool(np.all(a.memberships <= b.memberships + tol))


class FuzzyCovering:
    """Non-empty family of fuzzy sets covering every element with degree 1.

    Members are kept in the given order, duplicates included; derived
    constructions deduplicate by value.  Use :func:`validate_covering`
    (or this constructor, which delegates the checks) to build one.
    """

    __slots__ = ("universe", "members", "matrix")

    def __init__(
        self,
        universe: Universe,
        members: Sequence[FuzzySet],
        strict: bool = False,
    ):
        if len(members) == 0:
            raise EmptyFamily("a covering needs at least one member")
        for s in members:
            if s.universe != universe:
                raise UniverseMismatch("member built over a different universe")
            if np.all(s.memberships <= EPS_EQ):
                raise EmptyMember("a covering member is identically zero")
        matrix = np.vstack([s.memberships for s in members])
        envelope = matrix.max(axis=0)
        uncovered = np.nonzero(envelope < 1.0 - EPS_EQ)[0]
        if uncovered.size:
            raise NotACovering(universe.labels[int(uncovered[0])])
        if strict and not np.any(np.all(matrix >= 1.0 - EPS_EQ, axis=1)):
            raise NotACovering(
                "strict mode: no single member is universally 1"
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "members", tuple(members))
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("FuzzyCovering is immutable")

    @classmethod
    def from_matrix(
        cls,
        universe: Universe,
        matrix: np.ndarray,
        strict: bool = False,
    ) -> "FuzzyCovering":
        """Rows of ``matrix`` become the members, in order."""
        matrix = np.asarray(matrix, dtype=float)
        return cls(universe, [FuzzySet(universe, row) for row in matrix], strict)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> FuzzySet:
        return self.members[i]

    def member_values(self) -> list[tuple[float, ...]]:
        return [tuple(row) for row in self.matrix]

    def __repr__(self):
        return f"FuzzyCovering({len(self.members)} members over n={self.universe.n})"


def validate_covering(
    members: Sequence[FuzzySet],
    universe: Universe,
    strict: bool = False,
) -> FuzzyCovering:
    """Check the covering invariants and return the covering.

    ``strict`` additionally demands one member that is identically 1
    (the literal one-universal-member reading); the default is the
    per-element condition max_K K(x) = 1 used everywhere in practice.
    """
    return FuzzyCovering(universe, members, strict=strict)


def dedup_by_value(sets: Sequence[FuzzySet], tol: float = EPS_EQ) -> list[FuzzySet]:
    """Drop later duplicates (pointwise equal within tol), keep order."""
    kept: list[FuzzySet] = []
    for s in sets:
        if not any(s.approx_equals(k, tol) for k in kept):
            kept.append(s)
    return kept
