"""Batch front-end: validate matrices, inspect logics, run decisions.

Subcommands: ``validate``, ``axioms``, ``neighborhoods``, ``approx``,
``decide``, ``compare``.  Input is a CSV decision matrix (header row of
attribute names, first column alternative ids, cells in [0, 1]); the
same file shape doubles as a fuzzy covering, columns being the members.

Exit codes: 0 ok, 2 parse error, 3 validation failure, 4 numeric
degeneracy, 5 unsupported size.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .core import REPORT_TOL
from .errors import (
    CoveringTooLarge,
    DegenerateIdeal,
    FuzzyCoverError,
    LengthMismatch,
    ParseError,
    RangeError,
    ZeroUpperCardinality,
)
from .logic import (
    BUILTIN_NAMES,
    Logic,
    builtin_aggregator,
    check_adjointness,
    check_axioms,
    residual_implicator,
)
from .neighborhood import (
    group_operators,
    lattice_relations,
    operator_label,
)
from .rough import (
    ApproximationModel,
    approximation_precision,
    group_of,
    lower_approximation,
    upper_approximation,
)
from .topsis import DecisionProblem, run_pipeline, spearman_rho

SCHEMA_VERSION = 1
THREADS_ENV = "FUZZYCOVER_THREADS"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_DEGENERATE = 4
EXIT_TOO_LARGE = 5

DEFAULTS = {
    "model": "A1",
    "logic": "overlap",
    "agg": None,  # resolved from the logic family
    "tolerance": REPORT_TOL,
    "format": "json",
    "threads": 1,
}

_FAMILY_DEFAULT_AGG = {"overlap": "OD", "tnorm": "Tprod"}

#: Shorthand model specs used in reports and comparisons.
MODEL_ALIASES = {
    "M1": ("A1", "overlap", "OD"),
    "M2": ("H1", "overlap", "OD"),
    "M3": ("A1", "tnorm", "Tprod"),
    "M4": ("H1", "tnorm", "Tprod"),
}

_OVERLAP_GROUP_ORDER = (
    "A1", "A2", "A3", "B", "C", "D", "E", "F1", "F2",
    "G", "H1", "H2", "I", "J", "K", "L", "M",
)
_TNORM_GROUP_ORDER = tuple(g for g in _OVERLAP_GROUP_ORDER if g != "A3")


# ---------------------------------------------------------------------------
# ingest / serialize
# ---------------------------------------------------------------------------

def ingest_matrix(
    path_or_text: str,
    cost: Sequence[str] = (),
    strict: bool = False,
    is_text: bool = False,
) -> DecisionProblem:
    """Parse a CSV decision matrix into a validated problem.

    ``cost`` names the cost attributes (all others are benefit).
    """
    if is_text:
        text = path_or_text
    else:
        with open(path_or_text, "r", encoding="utf-8") as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError(1, 1, "empty file")
    header = [c.strip() for c in rows[0]]
    if len(header) < 2:
        raise ParseError(1, 1, "expected an id column plus attribute columns")
    attrs = header[1:]
    alts: list[str] = []
    values: list[list[float]] = []
    for li, row in enumerate(rows[1:], start=2):
        cells = [c.strip() for c in row]
        if len(cells) != len(header):
            raise ParseError(li, len(cells) + 1,
                             f"expected {len(header)} cells, got {len(cells)}")
        alts.append(cells[0])
        parsed = []
        for ci, cell in enumerate(cells[1:], start=2):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(li, ci, f"not a number: {cell!r}")
            if not 0.0 <= v <= 1.0:
                raise RangeError(
                    f"line {li}, column {ci}: value {v} outside [0, 1]"
                )
            parsed.append(v)
        values.append(parsed)
    if not values:
        raise ParseError(2, 1, "no data rows")
    unknown = [c for c in cost if c not in attrs]
    if unknown:
        raise ValueError(f"unknown cost attribute {unknown[0]!r}")
    cost_idx = [attrs.index(c) for c in cost]
    return DecisionProblem.from_matrix(
        np.array(values), alts, attrs, cost=cost_idx, strict=strict
    )


def serialize_problem(problem: DecisionProblem) -> str:
    """CSV text whose ingest reproduces the problem bit-for-values."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["id", *problem.attributes])
    for t, lab in enumerate(problem.universe.labels):
        w.writerow([lab, *[repr(float(v)) for v in problem.matrix[t]]])
    return out.getvalue()


# ---------------------------------------------------------------------------
# config plumbing
# ---------------------------------------------------------------------------

def _load_config_file(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for li, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError(li, 1, f"expected key=value, got {line!r}")
            key, _, val = line.partition("=")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _setting(args, file_cfg: dict, key: str, default):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in file_cfg:
        return file_cfg[key]
    return default


def _check_benefit_split(problem, benefit_arg):
    """The benefit list is redundant (everything not cost is benefit);
    when given it must agree with the cost list."""
    if benefit_arg is None:
        return
    names = [n for n in str(benefit_arg).split(",") if n]
    declared = {problem.attributes.index(n) for n in names
                if n in problem.attributes}
    unknown = [n for n in names if n not in problem.attributes]
    if unknown:
        raise ValueError(f"unknown benefit attribute {unknown[0]!r}")
    if declared != set(problem.benefit):
        raise ValueError("benefit list conflicts with the cost list")


def _resolve_logic(family: str, agg_name: Optional[str]) -> Logic:
    if family not in _FAMILY_DEFAULT_AGG:
        raise ValueError(f"logic family must be overlap or tnorm, got {family!r}")
    name = agg_name or _FAMILY_DEFAULT_AGG[family]
    logic = Logic.from_name(name)
    if logic.family != family:
        raise ValueError(
            f"aggregator {name} belongs to the {logic.family} family, "
            f"not {family}"
        )
    return logic


def _resolve_threads(args, file_cfg) -> int:
    val = getattr(args, "threads", None)
    if val is None:
        val = file_cfg.get("threads")
    if val is None:
        val = os.environ.get(THREADS_ENV)
    try:
        return max(1, int(val)) if val is not None else 1
    except ValueError:
        raise ValueError(f"thread count must be an integer, got {val!r}")


def _parse_model_spec(spec: str, default_family: str, default_agg: Optional[str]):
    """Return (group, family, aggregator_name) from a spec token.

    Tokens: M1..M4 aliases, ``GROUP``, ``GROUP:FAMILY`` or
    ``GROUP:FAMILY:AGG``.
    """
    if spec in MODEL_ALIASES:
        return MODEL_ALIASES[spec]
    parts = spec.split(":")
    group = parts[0]
    family = parts[1] if len(parts) > 1 else default_family
    agg = parts[2] if len(parts) > 2 else (
        default_agg if family == default_family else None
    )
    return group, family, agg


def _expand_model_specs(tokens, default_family, default_agg):
    out = []
    for tok in tokens:
        if tok == "onrfrs":
            out.extend(f"{g}:overlap" for g in _OVERLAP_GROUP_ORDER)
        elif tok == "tnrfrs":
            out.extend(f"{g}:tnorm" for g in _TNORM_GROUP_ORDER)
        else:
            out.append(tok)
    return [_parse_model_spec(t, default_family, default_agg) for t in out]


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def _emit(report: dict, fmt: str, csv_rows, out_path: Optional[str]):
    if fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in csv_rows:
            w.writerow(row)
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _floats(values) -> list[float]:
    return [float(v) for v in values]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_validate(args, file_cfg) -> int:
    strict = bool(_setting(args, file_cfg, "strict_covering", False))
    problem = ingest_matrix(args.input, cost=args.cost or (), strict=strict)
    _check_benefit_split(problem, _setting(args, file_cfg, "benefit", None))
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "validate",
        "input": args.input,
        "valid": True,
        "strict": strict,
        "alternatives": list(problem.universe.labels),
        "attributes": list(problem.attributes),
        "benefit": sorted(problem.attributes[s] for s in problem.benefit),
        "cost": sorted(problem.attributes[s] for s in problem.cost),
        "errors": [],
    }
    rows = [["field", "value"],
            ["valid", "true"],
            ["alternatives", problem.n_alternatives],
            ["attributes", problem.n_attributes]]
    _emit(report, _setting(args, file_cfg, "format", DEFAULTS["format"]),
          rows, args.output)
    return EXIT_OK


def _cmd_axioms(args, file_cfg) -> int:
    name = _setting(args, file_cfg, "agg", None)
    if name is None:
        family = _setting(args, file_cfg, "logic", DEFAULTS["logic"])
        name = _FAMILY_DEFAULT_AGG.get(family, "OD")
    agg = builtin_aggregator(name)
    step = float(_setting(args, file_cfg, "grid_step", 0.01))
    axioms = check_axioms(agg, step)
    imp = residual_implicator(agg)
    adj = check_adjointness(agg, imp, step)
    declared_failed = axioms.declared_failures(agg)
    error_records = list(declared_failed)
    if not adj.passed:
        error_records.append("adjointness")
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "axioms",
        "aggregator": agg.name,
        "family": agg.family,
        "declared_axioms": sorted(agg.declared_axioms),
        "axioms": {
            ax: {
                "passed": chk.passed,
                "witness": list(chk.witness) if chk.witness else None,
                "info": chk.info,
            }
            for ax, chk in sorted(axioms.results.items())
        },
        "max_adjacent_jump": axioms.max_adjacent_jump,
        "implicator_form": imp.form,
        "adjointness": {
            "passed": adj.passed,
            "witnesses": [list(w) for w in adj.witnesses],
        },
        "declared_failures": declared_failed,
        "errors": error_records,
    }
    rows = [["axiom", "passed", "witness"]]
    for ax, chk in sorted(axioms.results.items()):
        rows.append([ax, str(chk.passed).lower(),
                     "" if not chk.witness else ";".join(map(str, chk.witness))])
    _emit(report, _setting(args, file_cfg, "format", DEFAULTS["format"]),
          rows, args.output)
    return EXIT_OK if not error_records else EXIT_VALIDATION


def _cmd_neighborhoods(args, file_cfg) -> int:
    strict = bool(_setting(args, file_cfg, "strict_covering", False))
    problem = ingest_matrix(args.input, strict=strict)
    family = _setting(args, file_cfg, "logic", DEFAULTS["logic"])
    logic = _resolve_logic(family, _setting(args, file_cfg, "agg", None))
    threads = _resolve_threads(args, file_cfg)
    grouping = group_operators(problem.covering, logic, threads)
    relations = lattice_relations(grouping)
    matrices = {
        label: [_floats(row) for row in op.matrix]
        for label, op in sorted(grouping.operators.items())
    }
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "neighborhoods",
        "aggregator": logic.name,
        "family": logic.family,
        "alternatives": list(problem.universe.labels),
        "matrices": matrices,
        "partition": [list(cl) for cl in grouping.partition],
        "expected_groups": {
            g: [operator_label(i, j) for i, j in members]
            for g, members in grouping.expected.items()
        },
        "equality_failures": [list(f) for f in grouping.equality_failures],
        "observed_relations": {
            f"{lo}<={hi}": rel for (lo, hi), rel in sorted(relations.items())
        },
        "errors": [list(f) for f in grouping.equality_failures],
    }
    rows = [["operator", *problem.universe.labels]]
    for label, mat in matrices.items():
        for x, row in zip(problem.universe.labels, mat):
            rows.append([f"{label}({x})", *row])
    _emit(report, _setting(args, file_cfg, "format", DEFAULTS["format"]),
          rows, args.output)
    return EXIT_OK if grouping.passed else EXIT_VALIDATION


def _cmd_approx(args, file_cfg) -> int:
    strict = bool(_setting(args, file_cfg, "strict_covering", False))
    problem = ingest_matrix(args.input, cost=args.cost or (), strict=strict)
    _check_benefit_split(problem, _setting(args, file_cfg, "benefit", None))
    family = _setting(args, file_cfg, "logic", DEFAULTS["logic"])
    logic = _resolve_logic(family, _setting(args, file_cfg, "agg", None))
    group = _setting(args, file_cfg, "model", DEFAULTS["model"])
    threads = _resolve_threads(args, file_cfg)
    model = _build_model(problem, group, logic, threads)
    entries = {}
    for s, name in enumerate(problem.attributes):
        k = problem.attribute_set(s)
        entries[name] = {
            "lower": _floats(lower_approximation(model, k).memberships),
            "upper": _floats(upper_approximation(model, k).memberships),
            "precision": approximation_precision(model, k),
        }
    total = sum(e["precision"] for e in entries.values())
    for e in entries.values():
        e["weight"] = e["precision"] / total
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "approx",
        "model": {"group": model.group_label, "family": model.family,
                  "aggregator": logic.name},
        "alternatives": list(problem.universe.labels),
        "attributes": entries,
        "errors": [],
    }
    rows = [["attribute", "precision", "weight"]]
    for name, e in entries.items():
        rows.append([name, repr(e["precision"]), repr(e["weight"])])
    _emit(report, _setting(args, file_cfg, "format", DEFAULTS["format"]),
          rows, args.output)
    return EXIT_OK


def _resolve_group(group_spec, logic) -> str:
    """Accept a class label (A1..M) or explicit ``i,j`` indices."""
    spec = str(group_spec)
    if "," in spec:
        i, j = (int(v) for v in spec.split(","))
        return group_of(i, j, logic.family)
    return spec


def _build_model(problem, group_spec, logic, threads) -> ApproximationModel:
    return ApproximationModel.from_group(
        problem.covering, _resolve_group(group_spec, logic), logic, threads
    )


def _cmd_decide(args, file_cfg) -> int:
    strict = bool(_setting(args, file_cfg, "strict_covering", False))
    problem = ingest_matrix(args.input, cost=args.cost or (), strict=strict)
    _check_benefit_split(problem, _setting(args, file_cfg, "benefit", None))
    family = _setting(args, file_cfg, "logic", DEFAULTS["logic"])
    logic = _resolve_logic(family, _setting(args, file_cfg, "agg", None))
    group = _resolve_group(_setting(args, file_cfg, "model", DEFAULTS["model"]),
                           logic)
    threads = _resolve_threads(args, file_cfg)
    result = run_pipeline(problem, group, logic, threads)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "decide",
        "model": {"group": result.group, "family": result.family,
                  "aggregator": result.logic_name},
        "tolerance": float(_setting(args, file_cfg, "tolerance",
                                    DEFAULTS["tolerance"])),
        "pis": dict(zip(problem.attributes, _floats(result.pis))),
        "nis": dict(zip(problem.attributes, _floats(result.nis))),
        "precisions": dict(zip(problem.attributes, _floats(result.precisions))),
        "weights": dict(zip(problem.attributes, _floats(result.weights))),
        "h_up": result.h_up,
        "h_down": result.h_down,
        "closeness": dict(zip(problem.universe.labels, _floats(result.closeness))),
        "ranking": list(result.ranking),
        "errors": [],
    }
    pos = {lab: i + 1 for i, lab in enumerate(result.ranking)}
    rows = [["alternative", "closeness", "rank"]]
    for lab, c in zip(problem.universe.labels, result.closeness):
        rows.append([lab, repr(float(c)), pos[lab]])
    _emit(report, _setting(args, file_cfg, "format", DEFAULTS["format"]),
          rows, args.output)
    return EXIT_OK


def _cmd_compare(args, file_cfg) -> int:
    strict = bool(_setting(args, file_cfg, "strict_covering", False))
    problem = ingest_matrix(args.input, cost=args.cost or (), strict=strict)
    _check_benefit_split(problem, _setting(args, file_cfg, "benefit", None))
    default_family = _setting(args, file_cfg, "logic", DEFAULTS["logic"])
    default_agg = _setting(args, file_cfg, "agg", None)
    specs = _expand_model_specs(args.models, default_family, default_agg)
    if len(specs) < 2:
        raise ValueError("compare needs at least two models")
    threads = _resolve_threads(args, file_cfg)

    names, rankings = [], []
    for group, family, agg in specs:
        logic = _resolve_logic(family, agg)
        result = run_pipeline(problem, group, logic, threads)
        names.append(f"{group}:{family}:{logic.name}")
        rankings.append(result.ranking)

    rho = [[spearman_rho(a, b) for b in rankings] for a in rankings]

    # per-alternative rank consistency: share of models agreeing on the
    # alternative's most frequent rank
    consistency = {}
    for lab in problem.universe.labels:
        ranks = [r.index(lab) + 1 for r in rankings]
        modal = max(set(ranks), key=lambda v: (ranks.count(v), -v))
        consistency[lab] = {
            "modal_rank": modal,
            "count": ranks.count(modal),
            "rate": ranks.count(modal) / len(ranks),
        }

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "compare",
        "models": names,
        "rankings": {name: list(r) for name, r in zip(names, rankings)},
        "spearman_rho": rho,
        "rank_consistency": consistency,
        "errors": [],
    }
    rows = [["model", *problem.universe.labels]]
    for name, r in zip(names, rankings):
        pos = {lab: i + 1 for i, lab in enumerate(r)}
        rows.append([name, *[pos[lab] for lab in problem.universe.labels]])
    rows.append(["rho", *[""] * problem.n_alternatives])
    for name, line in zip(names, rho):
        rows.append([name, *[repr(v) for v in line]])
    _emit(report, _setting(args, file_cfg, "format", DEFAULTS["format"]),
          rows, args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, with_input=True):
    if with_input:
        p.add_argument("input", help="CSV decision matrix / covering")
    p.add_argument("--config", help="optional key=value config file")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--logic", choices=["overlap", "tnorm"], default=None)
    p.add_argument("--agg", default=None,
                   help=f"aggregator name ({', '.join(BUILTIN_NAMES)})")
    p.add_argument("--model", default=None, help="model group A1..M or i,j")
    p.add_argument("--tolerance", type=float, default=None,
                   help="report tolerance (default 5e-4)")
    p.add_argument("--benefit", default=None,
                   help="comma-separated benefit attribute names (default all)")
    p.add_argument("--cost", type=lambda s: s.split(",") if s else [],
                   default=None, help="comma-separated cost attribute names")
    p.add_argument("--strict-covering", dest="strict_covering",
                   action="store_const", const=True, default=None)
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default ${THREADS_ENV} or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzycover",
        description="Fuzzy covering rough sets and weight-free TOPSIS decisions",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("validate", help="parse and validate the input"))
    ax = sub.add_parser("axioms", help="axiom and adjointness report")
    _add_common(ax, with_input=False)
    ax.add_argument("--grid-step", dest="grid_step", type=float, default=None)
    _add_common(sub.add_parser(
        "neighborhoods", help="all 24 operator matrices, grouping, relations"))
    _add_common(sub.add_parser(
        "approx", help="attribute approximations, precisions, weights"))
    _add_common(sub.add_parser("decide", help="run the decision pipeline"))
    cp = sub.add_parser("compare", help="rankings and Spearman rho across models")
    _add_common(cp)
    cp.add_argument("--models", nargs="+", required=True,
                    help="model specs (GROUP[:FAMILY[:AGG]], M1..M4, "
                         "onrfrs, tnrfrs)")
    return parser


_DISPATCH = {
    "validate": _cmd_validate,
    "axioms": _cmd_axioms,
    "neighborhoods": _cmd_neighborhoods,
    "approx": _cmd_approx,
    "decide": _cmd_decide,
    "compare": _cmd_compare,
}


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, (ZeroUpperCardinality, DegenerateIdeal)):
        return EXIT_DEGENERATE
    if isinstance(exc, CoveringTooLarge):
        return EXIT_TOO_LARGE
    if isinstance(exc, (FuzzyCoverError, ValueError, KeyError, OSError,
                        LengthMismatch)):
        return EXIT_VALIDATION
    raise exc


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    file_cfg = {}
    try:
        if getattr(args, "config", None):
            file_cfg = _load_config_file(args.config)
        return _DISPATCH[args.command](args, file_cfg)
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes
        code = _exit_code_for(exc)
        sys.stderr.write(f"error: {exc}\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
