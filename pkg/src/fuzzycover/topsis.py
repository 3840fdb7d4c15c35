"""Weight-free fuzzy TOPSIS on top of the rough approximation models.

The decision matrix columns are read as fuzzy sets over the alternatives
and double as the fuzzy covering that drives the approximation model, so
attribute weights need no elicitation: each attribute's weight is its
normalized approximation precision.  Closeness is the NIS-distance share
minus the PIS-distance share, normalized so the best achievable value
is 0 and everything else is negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import EPS_EQ, FuzzyCovering, FuzzySet, Universe
from .errors import DegenerateIdeal, LengthMismatch
from .logic import Logic
from .rough import ApproximationModel, approximation_precision


@dataclass(frozen=True)
class DecisionProblem:
    """Alternatives x attributes matrix with a benefit/cost split.

    ``matrix[t, s]`` scores alternative t on attribute s; every
    alternative must score 1 on at least one attribute (the covering
    condition over the alternatives universe).
    """

    universe: Universe
    attributes: tuple[str, ...]
    covering: FuzzyCovering
    benefit: frozenset[int]
    cost: frozenset[int]

    @classmethod
    def from_matrix(
        cls,
        matrix: np.ndarray,
        alternatives: Optional[Sequence[str]] = None,
        attributes: Optional[Sequence[str]] = None,
        cost: Sequence[int] = (),
        strict: bool = False,
    ) -> "DecisionProblem":
        matrix = np.asarray(matrix, dtype=float)
        n, m = matrix.shape
        alts = tuple(alternatives) if alternatives else tuple(
            f"x{t + 1}" for t in range(n)
        )
        attrs = tuple(attributes) if attributes else tuple(
            f"K{s + 1}" for s in range(m)
        )
        universe = Universe(alts)
        # columns become the members of the attribute covering
        cov = FuzzyCovering(
            universe,
            [FuzzySet(universe, matrix[:, s]) for s in range(m)],
            strict=strict,
        )
        cost_set = frozenset(int(c) for c in cost)
        bad = [c for c in cost_set if not 0 <= c < m]
        if bad:
            raise ValueError(f"cost attribute index out of range: {bad[0]}")
        benefit = frozenset(range(m)) - cost_set
        return cls(universe, attrs, cov, benefit, cost_set)

    @property
    def matrix(self) -> np.ndarray:
        """n_alternatives x m_attributes score matrix."""
        return self.covering.matrix.T

    @property
    def n_alternatives(self) -> int:
        return self.universe.n

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    def attribute_set(self, s: int) -> FuzzySet:
        return self.covering[s]


def ideal_solutions(p: DecisionProblem) -> tuple[np.ndarray, np.ndarray]:
    """Per-attribute PIS and NIS (max/min over alternatives, swapped for
    cost attributes)."""
    scores = p.matrix
    hi, lo = scores.max(axis=0), scores.min(axis=0)
    is_cost = np.array([s in p.cost for s in range(p.n_attributes)])
    pis = np.where(is_cost, lo, hi)
    nis = np.where(is_cost, hi, lo)
    return pis, nis


def ideal_distances(p: DecisionProblem) -> tuple[np.ndarray, np.ndarray]:
    """Absolute distances |K_s(x_t) - ideal_s|, shaped (m, n)."""
    pis, nis = ideal_solutions(p)
    scores = p.matrix.T  # (m, n)
    return np.abs(scores - pis[:, None]), np.abs(scores - nis[:, None])


def attribute_weights(p: DecisionProblem, model: ApproximationModel) -> np.ndarray:
    """Normalized approximation precisions of the attribute fuzzy sets."""
    precisions = np.array(
        [approximation_precision(model, p.attribute_set(s))
         for s in range(p.n_attributes)]
    )
    return precisions / precisions.sum()


def closeness(p: DecisionProblem, weights: np.ndarray) -> np.ndarray:
    """Closeness coefficient per alternative (all values <= 0)."""
    d_up, d_down = ideal_distances(p)
    w = np.asarray(weights, dtype=float)
    up_scores = w @ d_up      # per alternative
    down_scores = w @ d_down
    h_up = float(up_scores.min())
    h_down = float(down_scores.max())
    if h_up <= EPS_EQ or h_down <= EPS_EQ:
        raise DegenerateIdeal(
            "an alternative coincides with an ideal solution on every attribute"
        )
    return down_scores / h_down - up_scores / h_up


def rank(close: np.ndarray, labels: Sequence[str]) -> tuple[str, ...]:
    """Labels sorted by descending closeness; ties keep input order."""
    order = sorted(range(len(labels)), key=lambda t: (-close[t], t))
    return tuple(labels[t] for t in order)


def spearman_rho(r1: Sequence[str], r2: Sequence[str]) -> float:
    """Spearman rank correlation 1 - 6*sum(d^2) / (n(n^2-1)) between two
    total rankings of the same alternatives."""
    if len(r1) != len(r2) or set(r1) != set(r2):
        raise LengthMismatch("rankings cover different alternative sets")
    n = len(r1)
    if n < 2:
        raise LengthMismatch("need at least two ranked alternatives")
    pos2 = {lab: i for i, lab in enumerate(r2)}
    d2 = sum((i - pos2[lab]) ** 2 for i, lab in enumerate(r1))
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))


@dataclass
class DecisionResult:
    """Everything the pipeline produces, in universe/attribute order."""

    problem: DecisionProblem
    group: str
    logic_name: str
    family: str
    pis: np.ndarray
    nis: np.ndarray
    d_up: np.ndarray
    d_down: np.ndarray
    precisions: np.ndarray
    weights: np.ndarray
    h_up: float
    h_down: float
    closeness: np.ndarray
    ranking: tuple[str, ...] = field(default=())


def run_pipeline(
    p: DecisionProblem,
    group: str = "A1",
    logic: Logic | str = "OD",
    threads: int = 1,
) -> DecisionResult:
    """Execute the four decision steps for one model class and logic."""
    if isinstance(logic, str):
        logic = Logic.from_name(logic)
    model = ApproximationModel.from_group(p.covering, group, logic, threads)
    pis, nis = ideal_solutions(p)
    d_up, d_down = ideal_distances(p)
    precisions = np.array(
        [approximation_precision(model, p.attribute_set(s))
         for s in range(p.n_attributes)]
    )
    weights = precisions / precisions.sum()
    up_scores = weights @ d_up
    down_scores = weights @ d_down
    h_up = float(up_scores.min())
    h_down = float(down_scores.max())
    if h_up <= EPS_EQ or h_down <= EPS_EQ:
        raise DegenerateIdeal(
            "an alternative coincides with an ideal solution on every attribute"
        )
    close = down_scores / h_down - up_scores / h_up
    return DecisionResult(
        problem=p,
        group=group,
        logic_name=logic.name,
        family=logic.family,
        pis=pis,
        nis=nis,
        d_up=d_up,
        d_down=d_down,
        precisions=precisions,
        weights=weights,
        h_up=h_up,
        h_down=h_down,
        closeness=close,
        ranking=rank(close, p.universe.labels),
    )
