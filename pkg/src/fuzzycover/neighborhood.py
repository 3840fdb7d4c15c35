"""Fuzzy neighborhood systems, derived coverings, and the four operators.

Given a finite fuzzy covering C and a logic pair (aggregator O, residual
implicator I), four neighborhood operators are available::

    N1(x)(y) = inf_{K in C}        I(K(x), K(y))
    N2(x)(y) = sup_{K in md(C,x)}  O(K(x), K(y))
    N3(x)(y) = inf_{K in MD(C,x)}  I(K(x), K(y))
    N4(x)(y) = sup_{K in C}        O(K(x), K(y))

where md/MD are the minimal/maximal descriptions of x.  Six coverings are
derived from C (indexing used throughout: j = 0..5):

    0: C itself              3: neighborhoods under N1
    1: union of all md sets  4: neighborhoods under N4
    2: union of all MD sets  5: intersection-irreducible members of C

Pairing the four operators with the six coverings yields 24 operators
that collapse into 17 equality classes for overlap logic (16 for t-norm
logic); the classes and the verified partial-order edges between them
are exported as data at the bottom of this module.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    EPS_EQ,
    FuzzyCovering,
    FuzzySet,
    Universe,
    dedup_by_value,
)
from .errors import CoveringTooLarge, MissingO7, UniverseMismatch
from .logic import Logic

#: Reduction of C to its irreducible members is exponential in spirit;
#: refuse families larger than this.
MAX_REDUCT_SIZE = 20

VARIANT_LABELS = ("C0", "C1", "C2", "C3", "C4", "Cint")


def operator_label(index: int, variant: int) -> str:
    return f"N{index}^C{variant}"


# ---------------------------------------------------------------------------
# descriptions
# ---------------------------------------------------------------------------

def neighborhood_system(cov: FuzzyCovering, x: str) -> list[int]:
    """Indices of members with strictly positive membership at x."""
    xi = cov.universe.index(x)
    return [s for s in range(len(cov)) if cov.matrix[s, xi] > EPS_EQ]


def _description(cov: FuzzyCovering, xi: int, maximal: bool) -> list[int]:
    m = cov.matrix
    cs = [s for s in range(len(cov)) if m[s, xi] > EPS_EQ]
    out = []
    for s in cs:
        dominated = False
        for p in cs:
            if p == s or abs(m[p, xi] - m[s, xi]) > EPS_EQ:
                continue
            if np.max(np.abs(m[p] - m[s])) <= EPS_EQ:
                continue  # value-equal ties are all retained
            if maximal:
                if np.all(m[p] >= m[s] - EPS_EQ):
                    dominated = True
                    break
            else:
                if np.all(m[p] <= m[s] + EPS_EQ):
                    dominated = True
                    break
        if not dominated:
            out.append(s)
    return out


def minimal_description(cov: FuzzyCovering, x: str) -> list[int]:
    """md(C, x): members of the neighborhood system of x with no strictly
    smaller member sharing the same value at x."""
    return _description(cov, cov.universe.index(x), maximal=False)


def maximal_description(cov: FuzzyCovering, x: str) -> list[int]:
    """MD(C, x): dual of :func:`minimal_description` with containment
    reversed."""
    return _description(cov, cov.universe.index(x), maximal=True)


@dataclass(frozen=True)
class DescriptionFamily:
    """Per-element neighborhood system, md, and MD (as member indices)."""

    covering: FuzzyCovering
    systems: tuple[tuple[int, ...], ...]
    md: tuple[tuple[int, ...], ...]
    MD: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, cov: FuzzyCovering) -> "DescriptionFamily":
        n = cov.universe.n
        return cls(
            cov,
            tuple(tuple(neighborhood_system(cov, cov.universe.labels[i]))
                  for i in range(n)),
            tuple(tuple(_description(cov, i, False)) for i in range(n)),
            tuple(tuple(_description(cov, i, True)) for i in range(n)),
        )


# ---------------------------------------------------------------------------
# derived coverings
# ---------------------------------------------------------------------------

def _reduct(cov: FuzzyCovering, by_union: bool) -> FuzzyCovering:
    if len(cov) > MAX_REDUCT_SIZE:
        raise CoveringTooLarge(
            f"irreducible-member reduction capped at {MAX_REDUCT_SIZE} members"
        )
    members = dedup_by_value(cov.members)
    m = np.vstack([s.memberships for s in members])
    keep = []
    for s in range(len(members)):
        if by_union:
            others = [p for p in range(len(members))
                      if p != s and np.all(m[p] <= m[s] + EPS_EQ)]
            combined = np.max(m[others], axis=0) if others else None
        else:
            others = [p for p in range(len(members))
                      if p != s and np.all(m[p] >= m[s] - EPS_EQ)]
            combined = np.min(m[others], axis=0) if others else None
        reducible = combined is not None and np.max(np.abs(combined - m[s])) <= EPS_EQ
        if not reducible:
            keep.append(members[s])
    return FuzzyCovering(cov.universe, keep)


def intersection_reduct(cov: FuzzyCovering) -> FuzzyCovering:
    """Drop members expressible as an intersection of other members.

    A member K equals the intersection of some subfamily of C \\ {K}
    exactly when it equals the intersection of all its proper supersets
    in C \\ {K}, so no subset enumeration is needed.
    """
    return _reduct(cov, by_union=False)


def union_reduct(cov: FuzzyCovering) -> FuzzyCovering:
    """Dual of :func:`intersection_reduct`; for finite coverings the
    result coincides with the union of all minimal descriptions."""
    return _reduct(cov, by_union=True)


def _require_o7(logic: Logic, variant: int):
    if not logic.aggregator.declares("O7"):
        raise MissingO7(
            f"covering variant {VARIANT_LABELS[variant]} needs a reflexive "
            f"operator; aggregator {logic.aggregator.name} lacks O7"
        )


def derived_covering(
    cov: FuzzyCovering, variant: int, logic: Optional[Logic] = None
) -> FuzzyCovering:
    """Build covering variant j in 0..5 (see module docstring).

    Variants 3 and 4 evaluate N1/N4 over the original covering and need
    an O7 aggregator so the results cover (their diagonals are 1).
    Members of every derived family are deduplicated by value.
    """
    if variant == 0:
        return cov
    if variant == 1:
        fam = DescriptionFamily.of(cov)
        picked = sorted({s for md in fam.md for s in md})
        return FuzzyCovering(cov.universe, dedup_by_value([cov[s] for s in picked]))
    if variant == 2:
        fam = DescriptionFamily.of(cov)
        picked = sorted({s for MD in fam.MD for s in MD})
        return FuzzyCovering(cov.universe, dedup_by_value([cov[s] for s in picked]))
    if variant in (3, 4):
        if logic is None:
            raise ValueError("variants 3 and 4 need a logic pair")
        _require_o7(logic, variant)
        idx = 1 if variant == 3 else 4
        rows = _operator_matrix(cov, idx, logic)
        members = [FuzzySet(cov.universe, row) for row in rows]
        return FuzzyCovering(cov.universe, dedup_by_value(members))
    if variant == 5:
        return intersection_reduct(cov)
    raise ValueError(f"variant must be 0..5, got {variant}")


# ---------------------------------------------------------------------------
# the operators
# ---------------------------------------------------------------------------

def _neighborhood_row(
    m: np.ndarray, fam: DescriptionFamily, index: int, logic: Logic, xi: int
) -> np.ndarray:
    if index == 1:
        return logic.implicator(m[:, [xi]], m).min(axis=0)
    if index == 2:
        rows = m[list(fam.md[xi])]
        return logic.aggregator(rows[:, [xi]], rows).max(axis=0)
    if index == 3:
        rows = m[list(fam.MD[xi])]
        return logic.implicator(rows[:, [xi]], rows).min(axis=0)
    if index == 4:
        return logic.aggregator(m[:, [xi]], m).max(axis=0)
    raise ValueError(f"operator index must be 1..4, got {index}")


def _operator_matrix(
    cov: FuzzyCovering, index: int, logic: Logic, threads: int = 1
) -> np.ndarray:
    m = cov.matrix
    fam = DescriptionFamily.of(cov) if index in (2, 3) else None
    n = cov.universe.n
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(
                pool.map(lambda xi: _neighborhood_row(m, fam, index, logic, xi),
                         range(n))
            )
    else:
        rows = [_neighborhood_row(m, fam, index, logic, xi) for xi in range(n)]
    return np.vstack(rows)


def neighborhood(cov: FuzzyCovering, index: int, logic: Logic, x: str) -> FuzzySet:
    """The fuzzy neighborhood N_index(x) over ``cov``."""
    xi = cov.universe.index(x)
    fam = DescriptionFamily.of(cov) if index in (2, 3) else None
    return FuzzySet(cov.universe,
                    _neighborhood_row(cov.matrix, fam, index, logic, xi))


@dataclass(frozen=True)
class NeighborhoodOperator:
    """An N_i operator materialized as an n-by-n matrix over C_j.

    ``matrix[x, y]`` holds N_i^{C_j}(x)(y) in universe label order.
    """

    base: FuzzyCovering
    covering: FuzzyCovering
    index: int
    variant: int
    logic: Logic
    matrix: np.ndarray

    @property
    def label(self) -> str:
        return operator_label(self.index, self.variant)

    @property
    def universe(self) -> Universe:
        return self.base.universe

    def row(self, x: str) -> FuzzySet:
        return FuzzySet(self.universe, self.matrix[self.universe.index(x)])

    def value(self, x: str, y: str) -> float:
        u = self.universe
        return float(self.matrix[u.index(x), u.index(y)])


def build_operator(
    cov: FuzzyCovering,
    index: int,
    variant: int,
    logic: Logic,
    threads: int = 1,
) -> NeighborhoodOperator:
    """Materialize N_index over derived covering ``variant`` of ``cov``."""
    derived = derived_covering(cov, variant, logic)
    matrix = _operator_matrix(derived, index, logic, threads=threads)
    matrix.setflags(write=False)
    return NeighborhoodOperator(cov, derived, index, variant, logic, matrix)


def check_property(op: NeighborhoodOperator, prop: str):
    """Exhaustive reflexive / symmetric / O-transitive check.

    Returns ``(holds, witness)`` where the witness names the first
    violating element, pair, or triple.
    """
    n = op.matrix.shape[0]
    labels = op.universe.labels
    m = op.matrix
    if prop == "reflexive":
        for i in range(n):
            if abs(m[i, i] - 1.0) > EPS_EQ:
                return False, (labels[i],)
        return True, None
    if prop == "symmetric":
        for i in range(n):
            for j in range(n):
                if abs(m[i, j] - m[j, i]) > EPS_EQ:
                    return False, (labels[i], labels[j])
        return True, None
    if prop == "O-transitive":
        agg = op.logic.aggregator
        for y in range(n):
            lhs = agg(m[:, [y]], m[[y], :])  # [x, z]
            bad = np.nonzero(lhs > m + EPS_EQ)
            if bad[0].size:
                x, z = int(bad[0][0]), int(bad[1][0])
                return False, (labels[x], labels[y], labels[z])
        return True, None
    raise ValueError(f"unknown property {prop!r}")


# ---------------------------------------------------------------------------
# grouping and partial order
# ---------------------------------------------------------------------------

#: Equality classes of the 24 operators under overlap logic, in the
#: order their members are listed; the first member is the class
#: representative.
OVERLAP_GROUPS: dict[str, tuple[tuple[int, int], ...]] = {
    "A1": ((1, 0), (1, 1), (1, 5)),
    "A2": ((2, 3),),
    "A3": ((1, 3),),
    "B": ((3, 1),),
    "C": ((3, 3),),
    "D": ((4, 3),),
    "E": ((2, 0), (2, 1)),
    "F1": ((3, 0), (3, 2), (3, 5)),
    "F2": ((1, 2),),
    "G": ((1, 4),),
    "H1": ((4, 0), (4, 2), (4, 5)),
    "H2": ((2, 2),),
    "I": ((2, 4),),
    "J": ((3, 4),),
    "K": ((4, 4),),
    "L": ((4, 1),),
    "M": ((2, 5),),
}

#: t-norm logic merges N1^C3 into A1 (16 classes, no A3).
TNORM_GROUPS: dict[str, tuple[tuple[int, int], ...]] = {
    **{k: v for k, v in OVERLAP_GROUPS.items() if k != "A3"},
    "A1": ((1, 0), (1, 1), (1, 3), (1, 5)),
}

#: Verified <= edges between group representatives (an edge (a, b)
#: asserts a <= b pointwise).  The A1-vs-C relation is deliberately
#: absent: it is recorded per instance, never asserted globally.
LATTICE_EDGES: tuple[tuple[str, str], ...] = (
    ("A1", "F1"), ("E", "H1"), ("A1", "B"), ("E", "L"),
    ("F2", "F1"), ("H2", "H1"), ("A3", "C"), ("A2", "D"),
    ("I", "K"), ("G", "J"), ("M", "H1"), ("A1", "F2"),
    ("L", "H1"), ("M", "H2"),
)


def groups_for(family: str) -> dict[str, tuple[tuple[int, int], ...]]:
    return OVERLAP_GROUPS if family == "overlap" else TNORM_GROUPS


def representative(group: str, family: str) -> tuple[int, int]:
    try:
        return groups_for(family)[group][0]
    except KeyError:
        raise KeyError(f"unknown group {group!r} for family {family!r}")


@dataclass
class ComparisonResult:
    relation: str  # "equal" | "leq" | "geq" | "incomparable"
    #: first (x, y, a_value, b_value) with a > b, if any
    exceeds: Optional[tuple] = None
    #: first (x, y, a_value, b_value) with a < b, if any
    falls_below: Optional[tuple] = None


def compare_operators(
    a: NeighborhoodOperator, b: NeighborhoodOperator
) -> ComparisonResult:
    """Classify the pointwise relation between two operator matrices."""
    if a.universe != b.universe:
        raise UniverseMismatch("operators live on different universes")
    labels = a.universe.labels
    above = np.nonzero(a.matrix > b.matrix + EPS_EQ)
    below = np.nonzero(a.matrix < b.matrix - EPS_EQ)

    def first(idx):
        if not idx[0].size:
            return None
        i, j = int(idx[0][0]), int(idx[1][0])
        return (labels[i], labels[j], float(a.matrix[i, j]), float(b.matrix[i, j]))

    exceeds, falls_below = first(above), first(below)
    if exceeds is None and falls_below is None:
        rel = "equal"
    elif exceeds is None:
        rel = "leq"
    elif falls_below is None:
        rel = "geq"
    else:
        rel = "incomparable"
    return ComparisonResult(rel, exceeds, falls_below)


@dataclass
class GroupingReport:
    family: str
    operators: dict[str, NeighborhoodOperator]
    #: equality classes actually observed, each a sorted tuple of labels
    partition: tuple[tuple[str, ...], ...]
    expected: dict[str, tuple[tuple[int, int], ...]]
    #: expected within-group equalities that failed, as (group, label, label)
    equality_failures: list[tuple]

    @property
    def passed(self) -> bool:
        return not self.equality_failures

    def group_operator(self, group: str) -> NeighborhoodOperator:
        i, j = self.expected[group][0]
        return self.operators[operator_label(i, j)]


def group_operators(cov: FuzzyCovering, logic: Logic, threads: int = 1) -> GroupingReport:
    """Build all 24 operators, partition them by matrix equality, and
    check the catalogued within-group equalities for the logic family."""
    ops: dict[str, NeighborhoodOperator] = {}
    for i in range(1, 5):
        for j in range(6):
            ops[operator_label(i, j)] = build_operator(cov, i, j, logic, threads)

    labels = list(ops)
    classes: list[list[str]] = []
    for lab in labels:
        for cl in classes:
            if np.max(np.abs(ops[lab].matrix - ops[cl[0]].matrix)) <= EPS_EQ:
                cl.append(lab)
                break
        else:
            classes.append([lab])
    partition = tuple(tuple(sorted(cl)) for cl in classes)

    expected = groups_for(logic.family)
    failures: list[tuple] = []
    for group, members in expected.items():
        rep_i, rep_j = members[0]
        rep = ops[operator_label(rep_i, rep_j)]
        for i, j in members[1:]:
            other = ops[operator_label(i, j)]
            if np.max(np.abs(rep.matrix - other.matrix)) > EPS_EQ:
                failures.append((group, rep.label, other.label))
    return GroupingReport(logic.family, ops, partition, expected, failures)


def lattice_relations(report: GroupingReport) -> dict[tuple[str, str], str]:
    """Observed relation for every catalogued lattice edge (and for the
    undecided A1/C pair, recorded but never asserted)."""
    out: dict[tuple[str, str], str] = {}
    for lo, hi in LATTICE_EDGES:
        if lo not in report.expected or hi not in report.expected:
            continue  # A3 edges do not exist in the t-norm table
        cmp = compare_operators(report.group_operator(lo), report.group_operator(hi))
        out[(lo, hi)] = cmp.relation
    if "A3" in report.expected:
        cmp = compare_operators(report.group_operator("A1"), report.group_operator("C"))
        out[("A1", "C")] = cmp.relation
    return out
