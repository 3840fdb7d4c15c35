"""Fuzzy covering rough sets with overlap-function and t-norm logics.

The package splits into five layers:

* :mod:`fuzzycover.core` — fuzzy sets and coverings over finite universes;
* :mod:`fuzzycover.logic` — overlap functions / t-norms and residual
  implicators, with grid-based axiom and adjointness checkers;
* :mod:`fuzzycover.neighborhood` — the four neighborhood operators, six
  derived coverings, equality classes, and partial-order comparison;
* :mod:`fuzzycover.rough` — lower/upper approximations and precision;
* :mod:`fuzzycover.topsis` — the weight-free TOPSIS decision pipeline.
"""

__version__ = "0.1.0"

from .core import (
    EPS_EQ,
    REPORT_TOL,
    FuzzyCovering,
    FuzzySet,
    Universe,
    complement,
    dedup_by_value,
    is_subset,
    pointwise_intersection,
    pointwise_union,
    sigma_cardinality,
    validate_covering,
)
from .logic import (
    Aggregator,
    Implicator,
    Logic,
    BUILTIN_NAMES,
    builtin_aggregator,
    check_adjointness,
    check_axioms,
    check_implicator_axioms,
    numeric_residual_implicator,
    residual_implicator,
)
from .neighborhood import (
    LATTICE_EDGES,
    OVERLAP_GROUPS,
    TNORM_GROUPS,
    DescriptionFamily,
    NeighborhoodOperator,
    build_operator,
    check_property,
    compare_operators,
    derived_covering,
    group_operators,
    intersection_reduct,
    lattice_relations,
    maximal_description,
    minimal_description,
    neighborhood,
    neighborhood_system,
    union_reduct,
)
from .rough import (
    ApproximationModel,
    ApproximationPair,
    approximate,
    approximation_precision,
    compare_models,
    lower_approximation,
    upper_approximation,
)
from .topsis import (
    DecisionProblem,
    DecisionResult,
    attribute_weights,
    closeness,
    ideal_distances,
    ideal_solutions,
    rank,
    run_pipeline,
    spearman_rho,
)

__all__ = [name for name in dir() if not name.startswith("_")]
