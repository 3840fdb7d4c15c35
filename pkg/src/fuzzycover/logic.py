"""Binary aggregators on [0,1]^2 and their residual implicators.

Two families are supported: overlap functions (commutative, continuous,
increasing, vanishing exactly on the axes, reaching 1 exactly at (1,1),
not necessarily associative) and t-norms.  Each builtin ships with its
residual implicator in closed form; arbitrary increasing aggregators get
a numeric residual ``sup{z : O(x, z) <= y}`` computed by bisection.

Axiom names follow the usual numbering:

* O1 commutativity, O2 zero exactly on the axes, O3 one exactly at (1,1),
  O4 increasing, O5 continuous, O6 exchange principle
  ``O(x, O(y, u)) = O(y, O(x, u))``,
* O7 one-section deflation ``O(x, 1) <= x``,
* O8 one-section inflation ``O(x, 1) >= x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import EPS_EQ
from .errors import NonMonotoneAggregator, UnknownAggregator

#: Grid step for the standard axiom / adjointness checks.
STANDARD_GRID_STEP = 0.01

#: Bisection tolerance of the numeric residual implicator.
EPS_SUP = 1e-7

_ArrayFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _vectorized(fn: _ArrayFn):
    """Wrap an array function so scalars in give scalars out."""

    def call(x, y):
        xs = np.asarray(x, dtype=float)
        ys = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = fn(xs, ys)
        if np.isscalar(x) and np.isscalar(y):
            return float(out)
        return out

    return call


@dataclass(frozen=True)
class Aggregator:
    """A binary [0,1]^2 -> [0,1] function with declared axiom flags."""

    name: str
    family: str  # "overlap" | "tnorm"
    _fn: _ArrayFn = field(repr=False)
    declared_axioms: frozenset = frozenset()

    def __call__(self, x, y):
        return _vectorized(self._fn)(x, y)

    def declares(self, axiom: str) -> bool:
        return axiom in self.declared_axioms


@dataclass(frozen=True)
class Implicator:
    """Residual implicator I(x, y) = max{z : O(x, z) <= y} of ``source``."""

    source: Aggregator
    _fn: _ArrayFn = field(repr=False)
    form: str = "closed-form"  # or "numeric-sup"

    def __call__(self, x, y):
        return _vectorized(self._fn)(x, y)


# ---------------------------------------------------------------------------
# builtin aggregators
# ---------------------------------------------------------------------------

def _o2v(x, y):
    hi = (x > 0.5) & (y > 0.5)
    quad = (1.0 + (2 * x - 1) ** 2 * (2 * y - 1) ** 2) / 2.0
    return np.where(hi, quad, np.minimum(x, y))


def _om12(x, y):
    return np.minimum(np.sqrt(x), np.sqrt(y))


def _ommv(x, y):
    hi = (x > 0.5) & (y > 0.5)
    a, b = 2 * x - 1, 2 * y - 1
    mid = (1.0 + np.minimum(a, b) * np.maximum(a * a, b * b)) / 2.0
    return np.where(hi, mid, np.minimum(x, y))


def _od(x, y):
    return (x * y) ** 2


def _om2(x, y):
    return np.minimum(x, y) ** 2


def _tprod(x, y):
    return x * y


def _tmin(x, y):
    return np.minimum(x, y)


# ---------------------------------------------------------------------------
# closed-form residual implicators
# ---------------------------------------------------------------------------

def _i_o2v(x, y):
    # branch order matters only for presentation; the three cases tile
    # [0,1]^2 exactly (see tests for the tiling check)
    top = np.minimum(
        1.0, np.sqrt(np.maximum(2 * y - 1, 0.0)) / (2 * (2 * x - 1)) + 0.5
    )
    c1 = (x > 0.5) & (y >= 0.5)
    c2 = (y < 0.5) & (x > y)
    return np.where(c1, top, np.where(c2, y, 1.0))


def _i_om12(x, y):
    return np.where(np.sqrt(x) <= y, 1.0, y * y)


def _i_ommv(x, y):
    a, b = 2 * x - 1, 2 * y - 1
    b = np.maximum(b, 0.0)
    inner = np.minimum(np.sqrt(b) / (2 * np.sqrt(np.maximum(a, 0.0))),
                       b / (2 * a * a))
    top = np.minimum(1.0, inner + 0.5)
    c1 = (x > 0.5) & (y >= 0.5)
    c2 = (y < 0.5) & (x > y)
    return np.where(c1, top, np.where(c2, y, 1.0))


def _i_od(x, y):
    return np.where(x * x <= y, 1.0, np.sqrt(y) / x)


def _i_om2(x, y):
    return np.where(x * x <= y, 1.0, np.sqrt(y))


def _goguen(x, y):
    return np.where(x <= y, 1.0, y / x)


def _goedel(x, y):
    return np.where(x <= y, 1.0, y)


_O_AXIOMS = frozenset({"O1", "O2", "O3", "O4", "O5"})
_TNORM_AXIOMS = _O_AXIOMS | {"O6", "O7", "O8", "left-continuous"}

_BUILTINS: dict[str, Aggregator] = {}
_CLOSED_FORMS: dict[str, _ArrayFn] = {}


def _register(name, family, fn, axioms, implicator_fn):
    _BUILTINS[name] = Aggregator(name, family, fn, frozenset(axioms))
    _CLOSED_FORMS[name] = implicator_fn


_register("O2V", "overlap", _o2v, _O_AXIOMS | {"O7"}, _i_o2v)
_register("Om12", "overlap", _om12, _O_AXIOMS | {"O8"}, _i_om12)
_register("OmMV", "overlap", _ommv, _O_AXIOMS | {"O7", "O8"}, _i_ommv)
_register("OD", "overlap", _od, _O_AXIOMS | {"O7"}, _i_od)
_register("Om2", "overlap", _om2, _O_AXIOMS | {"O7"}, _i_om2)
_register("Tprod", "tnorm", _tprod, _TNORM_AXIOMS, _goguen)
_register("Tmin", "tnorm", _tmin, _TNORM_AXIOMS, _goedel)

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_aggregator(name: str) -> Aggregator:
    """Look up a builtin aggregator by its stable string identifier."""
    try:
        return _BUILTINS[name]
    except KeyError:
        raise UnknownAggregator(
            f"{name!r}; available: {', '.join(BUILTIN_NAMES)}"
        )


def _grid(step: float) -> np.ndarray:
    k = int(round(1.0 / step))
    return np.linspace(0.0, 1.0, k + 1)


def _check_increasing(agg: Aggregator, step: float) -> Optional[tuple]:
    g = _grid(step)
    table = agg(g[:, None], g[None, :])
    dx = np.nonzero(table[1:, :] < table[:-1, :] - 1e-12)
    if dx[0].size:
        i, j = int(dx[0][0]), int(dx[1][0])
        return (g[i], g[j], g[i + 1], g[j])
    dy = np.nonzero(table[:, 1:] < table[:, :-1] - 1e-12)
    if dy[0].size:
        i, j = int(dy[0][0]), int(dy[1][0])
        return (g[i], g[j], g[i], g[j + 1])
    return None


def residual_implicator(a: Aggregator, grid_step: float = STANDARD_GRID_STEP) -> Implicator:
    """Residual implicator of ``a``: closed form when catalogued, else
    a numeric ``sup{z : O(x, z) <= y}`` by bisection on the monotone
    section O(x, .) to tolerance ``EPS_SUP``."""
    witness = _check_increasing(a, grid_step)
    if witness is not None:
        raise NonMonotoneAggregator(
            f"{a.name} decreases between grid points {witness}"
        )
    if a.name in _CLOSED_FORMS:
        return Implicator(a, _CLOSED_FORMS[a.name], "closed-form")
    return Implicator(a, _numeric_sup(a), "numeric-sup")


def numeric_residual_implicator(a: Aggregator) -> Implicator:
    """Always-numeric residual, used to cross-check the closed forms."""
    return Implicator(a, _numeric_sup(a), "numeric-sup")


def _numeric_sup(agg: Aggregator) -> _ArrayFn:
    iters = max(1, math.ceil(-math.log2(EPS_SUP)))

    def fn(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        saturated = agg(x, np.ones_like(x)) <= y
        lo = np.zeros_like(x)
        hi = np.ones_like(x)
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            ok = agg(x, mid) <= y
            lo = np.where(ok, mid, lo)
            hi = np.where(ok, hi, mid)
        # hi is the bisection upper bound for sup; exact 1 where O(x,1)<=y
        return np.where(saturated, 1.0, hi)

    return fn


# ---------------------------------------------------------------------------
# axiom and adjointness reports
# ---------------------------------------------------------------------------

@dataclass
class AxiomCheck:
    axiom: str
    passed: bool
    witness: Optional[tuple] = None
    info: str = ""


@dataclass
class AxiomReport:
    aggregator: str
    grid_step: float
    results: dict[str, AxiomCheck]
    #: O5 is a heuristic (continuity is not decidable from samples);
    #: it is reported here, never asserted for user-supplied functions.
    max_adjacent_jump: float = 0.0

    def passed(self, axiom: str) -> bool:
        return self.results[axiom].passed

    def declared_failures(self, agg: Aggregator) -> list[str]:
        """Declared axioms the grid refutes.  O5 is excluded: continuity
        is not decidable from samples, so its entry stays a report."""
        return [
            ax
            for ax in sorted(agg.declared_axioms)
            if ax in self.results and ax != "O5" and not self.results[ax].passed
        ]


def check_axioms(a: Aggregator, grid_step: float = STANDARD_GRID_STEP) -> AxiomReport:
    """Grid-based pass/fail per axiom O1-O8 with a witness on failure.

    O2/O3 are tested exactly at the boundary, O4 pairwise along grid
    lines, O6 on all grid triples, O7/O8 along the x-axis.  O5 records
    the maximum adjacent-cell jump against a Lipschitz-style bound;
    that entry is a report, not a proof of continuity.
    """
    if not 0 < grid_step <= 0.1:
        raise ValueError("grid_step must lie in (0, 0.1]")
    g = _grid(grid_step)
    table = a(g[:, None], g[None, :])
    results: dict[str, AxiomCheck] = {}

    # O1 commutativity
    diff = np.abs(table - table.T)
    idx = np.unravel_index(int(np.argmax(diff)), diff.shape)
    results["O1"] = AxiomCheck(
        "O1",
        bool(diff[idx] <= 1e-12),
        None if diff[idx] <= 1e-12 else (float(g[idx[0]]), float(g[idx[1]])),
    )

    # O2: zero exactly on the axes
    axis_zero = np.max(np.abs(np.concatenate([table[0, :], table[:, 0]])))
    interior = table[1:, 1:]
    pos_bad = np.nonzero(interior <= 0.0)
    o2_ok = axis_zero <= EPS_EQ and pos_bad[0].size == 0
    o2_wit = None
    if axis_zero > EPS_EQ:
        o2_wit = (0.0, float(g[int(np.argmax(np.abs(table[0, :])))]))
    elif pos_bad[0].size:
        o2_wit = (float(g[pos_bad[0][0] + 1]), float(g[pos_bad[1][0] + 1]))
    results["O2"] = AxiomCheck("O2", bool(o2_ok), o2_wit)

    # O3: one exactly at (1,1)
    one_at_corner = abs(table[-1, -1] - 1.0) <= EPS_EQ
    inside = table.copy()
    inside[-1, -1] = 0.0
    hit = np.nonzero(inside >= 1.0 - EPS_EQ)
    o3_ok = one_at_corner and hit[0].size == 0
    o3_wit = None if o3_ok else (
        (1.0, 1.0) if not one_at_corner
        else (float(g[hit[0][0]]), float(g[hit[1][0]]))
    )
    results["O3"] = AxiomCheck("O3", bool(o3_ok), o3_wit)

    # O4 increasing
    wit = _check_increasing(a, grid_step)
    results["O4"] = AxiomCheck("O4", wit is None, wit)

    # O5 continuity heuristic: adjacent jumps bounded by a modulus that
    # admits Hoelder-1/2 sections (sqrt-shaped builtins) while still
    # flagging genuine jump discontinuities
    jump = max(
        float(np.max(np.abs(np.diff(table, axis=0)))),
        float(np.max(np.abs(np.diff(table, axis=1)))),
    )
    bound = max(5.0 * grid_step, 2.0 * float(np.sqrt(grid_step)))
    results["O5"] = AxiomCheck(
        "O5",
        jump <= bound,
        None,
        info=f"max adjacent jump {jump:.6g} (heuristic bound {bound:g}); "
        "reported, not asserted",
    )

    # O6 exchange principle on grid triples
    x = g[:, None, None]
    y = g[None, :, None]
    u = g[None, None, :]
    lhs = a(x, a(y, u))
    rhs = a(y, a(x, u))
    d6 = np.abs(lhs - rhs)
    i6 = np.unravel_index(int(np.argmax(d6)), d6.shape)
    o6_ok = d6[i6] <= 1e-9
    results["O6"] = AxiomCheck(
        "O6", bool(o6_ok),
        None if o6_ok else (float(g[i6[0]]), float(g[i6[1]]), float(g[i6[2]])),
    )

    # O7 / O8 on the x-axis
    sect = table[:, -1]
    bad7 = np.nonzero(sect > g + 1e-12)[0]
    results["O7"] = AxiomCheck(
        "O7",
        bad7.size == 0,
        None if bad7.size == 0 else (float(g[bad7[0]]), 1.0),
        info="" if bad7.size == 0 else
        f"O({g[bad7[0]]:g}, 1) = {sect[bad7[0]]:g} > {g[bad7[0]]:g}",
    )
    bad8 = np.nonzero(sect < g - 1e-12)[0]
    results["O8"] = AxiomCheck(
        "O8",
        bad8.size == 0,
        None if bad8.size == 0 else (float(g[bad8[0]]), 1.0),
    )

    return AxiomReport(a.name, grid_step, results, max_adjacent_jump=jump)


@dataclass
class AdjointnessReport:
    passed: bool
    witnesses: list[tuple]


def check_adjointness(
    a: Aggregator,
    i: Implicator,
    grid_step: float = STANDARD_GRID_STEP,
    max_witnesses: int = 5,
) -> AdjointnessReport:
    """Verify O(x, u) <= y  <=>  I(x, y) >= u on all grid triples.

    Hypotheses carry an EPS_EQ margin so exact boundary ties cannot
    produce spurious failures in floating point.
    """
    g = _grid(grid_step)
    o_xu = a(g[:, None], g[None, :])  # [x, u]
    i_xy = i(g[:, None], g[None, :])  # [x, y]

    # forward: O(x,u) <= y  =>  I(x,y) >= u
    hyp_f = o_xu[:, :, None] <= g[None, None, :] - EPS_EQ  # [x, u, y]
    con_f = i_xy[:, None, :] >= g[None, :, None] - EPS_EQ  # [x, u, y]
    viol_f = hyp_f & ~con_f

    # backward: I(x,y) >= u  =>  O(x,u) <= y
    hyp_b = i_xy[:, None, :] >= g[None, :, None] + EPS_EQ
    con_b = o_xu[:, :, None] <= g[None, None, :] + EPS_EQ
    viol_b = hyp_b & ~con_b

    witnesses: list[tuple] = []
    for viol, tag in ((viol_f, "O<=y but I<u"), (viol_b, "I>=u but O>y")):
        if viol.any():
            xs, us, ys = np.nonzero(viol)
            for k in range(min(max_witnesses - len(witnesses), xs.size)):
                witnesses.append(
                    (float(g[xs[k]]), float(g[us[k]]), float(g[ys[k]]), tag)
                )
    return AdjointnessReport(not witnesses, witnesses)


@dataclass
class ImplicatorReport:
    passed: bool
    failures: dict[str, tuple]


def check_implicator_axioms(
    i: Implicator, grid_step: float = STANDARD_GRID_STEP
) -> ImplicatorReport:
    """I1 first-place antitonicity, I2 second-place isotonicity, I3 boundary."""
    g = _grid(grid_step)
    t = i(g[:, None], g[None, :])
    failures: dict[str, tuple] = {}
    bad1 = np.nonzero(t[1:, :] > t[:-1, :] + 1e-12)
    if bad1[0].size:
        failures["I1"] = (float(g[bad1[0][0]]), float(g[bad1[1][0]]))
    bad2 = np.nonzero(t[:, 1:] < t[:, :-1] - 1e-12)
    if bad2[0].size:
        failures["I2"] = (float(g[bad2[0][0]]), float(g[bad2[1][0]]))
    boundary = {
        "I(0,0)=1": abs(t[0, 0] - 1.0) <= EPS_EQ,
        "I(1,1)=1": abs(t[-1, -1] - 1.0) <= EPS_EQ,
        "I(1,0)=0": abs(t[-1, 0]) <= EPS_EQ,
    }
    for name, ok in boundary.items():
        if not ok:
            failures["I3"] = (name,)
    return ImplicatorReport(not failures, failures)


@dataclass(frozen=True)
class Logic:
    """An aggregator together with its residual implicator.

    N1/N3-style operators consume the implicator, N2/N4-style operators
    the aggregator; both sides always come from the same source.
    """

    aggregator: Aggregator
    implicator: Implicator

    @classmethod
    def from_name(cls, name: str) -> "Logic":
        agg = builtin_aggregator(name)
        return cls(agg, residual_implicator(agg))

    @property
    def family(self) -> str:
        return self.aggregator.family

    @property
    def name(self) -> str:
        return self.aggregator.name
