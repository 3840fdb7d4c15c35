"""Neighborhood-related fuzzy covering rough approximation operators.

For an operator N built by the neighborhood module and a target fuzzy
set X, the approximation pair is the standard min/max form::

    lower(X)(x) = min_y [ (1 - N(x)(y)) or X(y) ]
    upper(X)(x) = max_y [ N(x)(y) and X(y) ]

with "or"/"and" read as max/min; the aggregator enters only through N.
Overlap-backed models are labelled ONRFRS, t-norm-backed ones TNRFRS;
both share the 17/16 class labels of the neighborhood groupings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EPS_EQ, FuzzyCovering, FuzzySet, complement, sigma_cardinality
from .errors import UniverseMismatch, UnknownModelGroup, ZeroUpperCardinality
from .logic import Logic
from .neighborhood import (
    NeighborhoodOperator,
    build_operator,
    groups_for,
    representative,
)


@dataclass(frozen=True)
class ApproximationModel:
    """A rough-set model: one neighborhood operator plus its class label."""

    operator: NeighborhoodOperator
    family: str
    group_label: str

    @classmethod
    def from_group(
        cls,
        cov: FuzzyCovering,
        group: str,
        logic: Logic,
        threads: int = 1,
    ) -> "ApproximationModel":
        """Resolve a class label (A1..M) to its representative (i, j) for
        the logic family and build that operator."""
        try:
            i, j = representative(group, logic.family)
        except KeyError:
            raise UnknownModelGroup(
                f"{group!r} is not a class of the {logic.family} table"
            )
        op = build_operator(cov, i, j, logic, threads)
        return cls(op, logic.family, group)

    @classmethod
    def from_indices(
        cls,
        cov: FuzzyCovering,
        index: int,
        variant: int,
        logic: Logic,
        threads: int = 1,
    ) -> "ApproximationModel":
        op = build_operator(cov, index, variant, logic, threads)
        return cls(op, logic.family, group_of(index, variant, logic.family))


def group_of(index: int, variant: int, family: str) -> str:
    """Class label of operator (index, variant) per the family's table."""
    for group, members in groups_for(family).items():
        if (index, variant) in members:
            return group
    raise UnknownModelGroup(f"operator ({index},{variant}) is not catalogued")


@dataclass(frozen=True)
class ApproximationPair:
    lower: FuzzySet
    upper: FuzzySet
    target: FuzzySet


def _check_target(m: ApproximationModel, x: FuzzySet):
    if x.universe != m.operator.universe:
        raise UniverseMismatch("target lives on a different universe")


def lower_approximation(m: ApproximationModel, x: FuzzySet) -> FuzzySet:
    _check_target(m, x)
    n = m.operator.matrix
    vals = np.min(np.maximum(1.0 - n, x.memberships[None, :]), axis=1)
    return FuzzySet(x.universe, vals)


def upper_approximation(m: ApproximationModel, x: FuzzySet) -> FuzzySet:
    _check_target(m, x)
    n = m.operator.matrix
    vals = np.max(np.minimum(n, x.memberships[None, :]), axis=1)
    return FuzzySet(x.universe, vals)


def approximate(m: ApproximationModel, x: FuzzySet) -> ApproximationPair:
    return ApproximationPair(lower_approximation(m, x), upper_approximation(m, x), x)


def approximation_precision(m: ApproximationModel, k: FuzzySet) -> float:
    """Sigma-count ratio |lower(K)| / |upper(K)|."""
    up = sigma_cardinality(upper_approximation(m, k))
    if up <= EPS_EQ:
        raise ZeroUpperCardinality("upper approximation has zero cardinality")
    return sigma_cardinality(lower_approximation(m, k)) / up


def compare_models(
    a: ApproximationModel, b: ApproximationModel, x: FuzzySet
) -> str:
    """Order the two approximation pairs of x.

    ``precedes`` means a's pair is tighter from both sides
    (lower_a >= lower_b and upper_a <= upper_b pointwise).
    """
    pa, pb = approximate(a, x), approximate(b, x)
    la, ua = pa.lower.memberships, pa.upper.memberships
    lb, ub = pb.lower.memberships, pb.upper.memberships
    lower_wider = bool(np.all(la >= lb - EPS_EQ))
    lower_narrower = bool(np.all(la <= lb + EPS_EQ))
    upper_tighter = bool(np.all(ua <= ub + EPS_EQ))
    upper_looser = bool(np.all(ua >= ub - EPS_EQ))
    if lower_wider and lower_narrower and upper_tighter and upper_looser:
        return "equal"
    if lower_wider and upper_tighter:
        return "precedes"
    if lower_narrower and upper_looser:
        return "succeeds"
    return "incomparable"


def duality_gap(m: ApproximationModel, x: FuzzySet) -> float:
    """Max deviation in lower(X^c) = (upper(X))^c; zero up to float noise."""
    lhs = lower_approximation(m, complement(x))
    rhs = complement(upper_approximation(m, x))
    return float(np.max(np.abs(lhs.memberships - rhs.memberships)))
