"""Command-line interface: solve, rearrange, oracle, verify.

Problem instances are JSON files::

    {"A": [[...], ...], "B": [[...], ...], "T": 2.0, "alpha": 2.0,
     "options": {"K": 4096, "tie_tol": 1e-9, "flat_tol": 0.001,
                 "drop_zero_columns": false}}

``solve`` writes report.json, schedule.json, profile.csv ("t,F"),
rearranged.csv ("x,Fstar") and figure.png into the output directory. All
reals are serialized with 17 significant digits so outputs round-trip
losslessly and diff cleanly. Exit codes: 0 success, 1 numeric or property
failure, 2 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import plots
from .errors import NonFiniteError, ValidationError
from .gramian import (
    LtiSystem,
    SampledProfile,
    Schedule,
    budget,
    concat_from_nodes,
    profile_nodes,
    trace_cost,
)
from .oracle import compare, knapsack_solve
from .rearrange import check_integral_identities, check_propositions, rearrange
from .sampling import dominating_profile, random_profile_pair, random_system
from .scheduler import solve

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_VALIDATION = 2


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _to_json(obj, indent: int = 0) -> str:
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_to_json(v, indent + 2)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(isinstance(v, (int, float, np.integer, np.floating, bool))
                   for v in seq)
        if flat:
            return "[" + ", ".join(_to_json(v) for v in seq) + "]"
        items = [f"{inner}{_to_json(v, indent + 2)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _write_json(path: Path, obj) -> None:
    path.write_text(_to_json(obj) + "\n")


def _load_problem(path: str, args) -> tuple[LtiSystem, list[int]]:
    """Parse a problem file, apply flag overrides, drop zero columns if asked.

    Returns the validated system together with the original 1-based indices
    of the solved actuators.
    """
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read problem file {path}: {exc}") from exc
    for key in ("A", "B", "T", "alpha"):
        if key not in raw:
            raise ValidationError(f"problem file is missing field {key!r}")
    options = raw.get("options", {})
    if not isinstance(options, dict):
        raise ValidationError("options must be an object")
    k = args.k if args.k is not None else options.get("K", 4096)
    tie_tol = args.tie_tol if args.tie_tol is not None else options.get("tie_tol", 1e-9)
    flat_tol = args.flat_tol if args.flat_tol is not None else options.get("flat_tol", 0.0)
    drop = args.drop_zero_columns or bool(options.get("drop_zero_columns", False))
    try:
        system = LtiSystem(raw["A"], raw["B"], float(raw["T"]), float(raw["alpha"]),
                           cells_per_actuator=int(k), tie_tol=float(tie_tol),
                           flat_tol=float(flat_tol))
    except (ValueError, TypeError) as exc:
        raise ValidationError(str(exc)) from exc
    if drop:
        system, kept = system.drop_zero_columns()
    else:
        kept = list(range(1, system.m + 1))
    system.validate()
    return system, kept


def _load_schedule(path: str, system: LtiSystem, kept: list[int]) -> Schedule:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read schedule file {path}: {exc}") from exc
    per_actuator = []
    for orig in kept:
        item = raw.get(str(orig), [])
        pairs = [(float(s), float(e)) for s, e in item]
        per_actuator.append(pairs)
    return Schedule(system.horizon, tuple(tuple(p) for p in per_actuator))


def cmd_solve(args) -> int:
    system, kept = _load_problem(args.input, args)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)

    report = solve(system)
    nodes = profile_nodes(system)
    rearranged = rearrange(concat_from_nodes(system, nodes), system.tie_tol)
    schedule_cost = trace_cost(system, report.canonical)
    spent = budget(report.canonical)

    flat_dof = None
    if report.flat_dof is not None:
        flat_dof = {
            "level_sets": {str(orig): report.flat_dof.level_sets[pos]
                           for pos, orig in enumerate(kept)},
            "free_measure": report.flat_dof.free_measure,
        }
    _write_json(outdir / "report.json", {
        "case": report.case.value,
        "threshold": report.threshold,
        "optimal_cost": report.optimal_cost,
        "unique": report.unique,
        "flat_dof": flat_dof,
        "schedule_cost": schedule_cost,
        "budget": spent,
        "alpha": system.alpha,
        "horizon": system.horizon,
        "actuator_indices": kept,
    })
    _write_json(outdir / "schedule.json", {
        str(orig): [[s, e] for s, e in report.canonical.actuator(pos + 1)]
        for pos, orig in enumerate(kept)
    })

    h = system.cell_width
    with open(outdir / "profile.csv", "w") as fh:
        fh.write("t,F\n")
        for pos in range(system.m):
            base = pos * system.horizon
            for kk, v in enumerate(nodes[pos]):
                fh.write(f"{_fmt(base + kk * h)},{_fmt(v)}\n")
    with open(outdir / "rearranged.csv", "w") as fh:
        fh.write("x,Fstar\n")
        cum = rearranged.cumulative_measure
        edges = np.concatenate(([0.0], cum[:-1]))
        for x, v in zip(edges, rearranged.values):
            fh.write(f"{_fmt(x)},{_fmt(v)}\n")
        fh.write(f"{_fmt(rearranged.source_measure)},{_fmt(rearranged.values[-1])}\n")

    if not args.no_figure:
        plots.render_solution_figure(outdir / "figure.png", system, nodes,
                                     rearranged, system.alpha, report.threshold)
    print(f"case={report.case.value} threshold={report.threshold:.12g} "
          f"optimal_cost={report.optimal_cost:.12g} unique={report.unique} "
          f"budget={spent:.12g}")
    return EXIT_OK


def cmd_rearrange(args) -> int:
    try:
        raw = json.loads(Path(args.input).read_text())
        domain = raw["domain"]
        values = np.asarray(raw["values"], dtype=float)
        profile = SampledProfile(float(domain[0]), float(domain[1]), values)
    except (OSError, json.JSONDecodeError, KeyError, IndexError,
            TypeError, ValueError) as exc:
        raise ValidationError(f"bad sampled-function file: {exc}") from exc
    tie_tol = args.tie_tol if args.tie_tol is not None else 1e-9
    rearranged = rearrange(profile, tie_tol)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "rearranged.csv", "w") as fh:
        fh.write("x,Fstar\n")
        cum = rearranged.cumulative_measure
        edges = np.concatenate(([0.0], cum[:-1]))
        for x, v in zip(edges, rearranged.values):
            fh.write(f"{_fmt(profile.domain_start + x)},{_fmt(v)}\n")
        fh.write(f"{_fmt(profile.domain_end)},{_fmt(rearranged.values[-1])}\n")
    if not args.no_figure:
        plots.render_rearrangement_figure(outdir / "figure.png", profile,
                                          rearranged)
    print(f"steps={len(rearranged.values)} mass={rearranged.cumulative_integral[-1]:.12g}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    system, kept = _load_problem(args.input, args)
    sel = knapsack_solve(system)
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    per_actuator = {str(orig): float(sel.weights[pos].sum()) * sel.cell_width
                    for pos, orig in enumerate(kept)}
    _write_json(outdir / "oracle.json", {
        "objective": sel.objective,
        "selected_measure": sel.selected_measure,
        "fractional_cells": sel.fractional_cells,
        "cell_width": sel.cell_width,
        "selected_measure_per_actuator": per_actuator,
    })
    print(f"objective={sel.objective:.12g} selected={sel.selected_measure:.12g} "
          f"fractional_cells={sel.fractional_cells}")
    return EXIT_OK


def _print_table(rows) -> None:
    print(f"{'property':<28}{'value':>14}{'tolerance':>14}  status")
    for name, value, tol, ok in rows:
        print(f"{name:<28}{value:>14.3e}{tol:>14.3e}  {'pass' if ok else 'FAIL'}")


def _schedule_checks(args) -> list[tuple[str, float, float, bool]]:
    system, kept = _load_problem(args.input, args)
    schedule = _load_schedule(args.schedule, system, kept)
    rows = []
    spent = budget(schedule)
    rows.append(("feasibility |budget-alpha|", abs(spent - system.alpha),
                 system.flat_tol, spent <= system.alpha + system.flat_tol))
    try:
        cost = trace_cost(system, schedule)
    except ValueError as exc:
        print(f"schedule invalid: {exc}")
        rows.append(("interval_range", float("inf"), 0.0, False))
        return rows
    if args.report:
        raw = json.loads(Path(args.report).read_text())
        ref = float(raw["schedule_cost"])
        resid = abs(cost - ref) / max(abs(ref), 1.0)
        rows.append(("cost_roundtrip", resid, 1e-9, resid <= 1e-9))
    return rows


def _property_suite(rng, trials: int) -> list[tuple[str, float, float, bool]]:
    max_l1 = 0.0
    level_mismatches = 0
    max_hl = -np.inf
    mono_violations = 0
    bounded_violations = 0
    max_identity = 0.0
    for _ in range(trials):
        f, g = random_profile_pair(rng)
        checks = check_propositions(f, g)
        max_l1 = max(max_l1, checks.l1_residual_f, checks.l1_residual_g)
        level_mismatches += checks.level_mismatches
        max_hl = max(max_hl, checks.hardy_littlewood_gap)
        bounded_violations += checks.bounded_violations
        dom = check_propositions(f, dominating_profile(f, g))
        mono_violations += dom.monotone_violations if dom.monotone_premise else 1
        x = float(rng.uniform(0.05, 0.95)) * f.span
        ident = check_integral_identities(f, x, delta=float(rng.uniform(0.0, 1.0)),
                                          subset_fraction=float(rng.uniform(0.1, 1.0)))
        for res in (ident.residual_nonstrict, ident.residual_strict,
                    ident.residual_flat):
            if res is not None:
                max_identity = max(max_identity, res)
    return [
        ("l1_conservation", max_l1, 1e-12, max_l1 <= 1e-12),
        ("level_set_measure", float(level_mismatches), 0.0, level_mismatches == 0),
        ("hardy_littlewood", max_hl, 1e-9, max_hl <= 1e-9),
        ("monotonicity", float(mono_violations), 0.0, mono_violations == 0),
        ("bounded_by_one", float(bounded_violations), 0.0, bounded_violations == 0),
        ("integral_identities", max_identity, 1e-9, max_identity <= 1e-9),
    ]


def _system_checks(systems) -> list[tuple[str, float, float, bool]]:
    max_budget = 0.0
    max_cost_identity = 0.0
    max_oracle = 0.0
    flat_tol = 0.0
    for system in systems:
        report = solve(system)
        spent = budget(report.canonical)
        max_budget = max(max_budget, abs(spent - system.alpha))
        flat_tol = max(flat_tol, system.flat_tol)
        cost = trace_cost(system, report.canonical)
        max_cost_identity = max(
            max_cost_identity,
            abs(cost - report.optimal_cost) / max(abs(report.optimal_cost), 1e-300))
        max_oracle = max(max_oracle, compare(system, report).objective_residual)
    return [
        ("budget |b-alpha|", max_budget, flat_tol, max_budget <= flat_tol),
        ("cost_identity", max_cost_identity, 1e-6, max_cost_identity <= 1e-6),
        ("oracle_residual", max_oracle, 1e-4, max_oracle <= 1e-4),
    ]


def cmd_verify(args) -> int:
    if args.schedule:
        if not args.input:
            raise ValidationError("--schedule requires a problem file")
        rows = _schedule_checks(args)
    else:
        rng = np.random.default_rng(args.seed)
        rows = _property_suite(rng, args.trials)
        if args.input:
            system, _ = _load_problem(args.input, args)
            rows += _system_checks([system])
        else:
            rows += _system_checks(
                random_system(rng, cells_per_actuator=1024)
                for _ in range(max(1, args.trials // 4)))
    _print_table(rows)
    failures = [name for name, _, _, ok in rows if not ok]
    if failures:
        print(f"FAILED: {failures[0]}")
        return EXIT_NUMERIC
    print("all properties within tolerance")
    return EXIT_OK


def _add_common(parser) -> None:
    parser.add_argument("--k", type=int, default=None,
                        help="grid cells per actuator (default 4096)")
    parser.add_argument("--tie-tol", type=float, default=None,
                        help="relative tolerance for tied profile values")
    parser.add_argument("--flat-tol", type=float, default=None,
                        help="measure tolerance for flat classification")
    parser.add_argument("--drop-zero-columns", action="store_true",
                        help="delete zero input columns instead of rejecting")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gramsched",
        description="Budgeted actuator schedules maximizing the "
                    "controllability-Grammian trace.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance and write outputs")
    p_solve.add_argument("input", help="problem JSON file")
    p_solve.add_argument("-o", "--output", default=".", help="output directory")
    p_solve.add_argument("--no-figure", action="store_true",
                         help="skip rendering figure.png")
    _add_common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_re = sub.add_parser("rearrange",
                          help="rearrangement of a sampled function file")
    p_re.add_argument("input", help='JSON file {"domain": [a, b], "values": [...]}')
    p_re.add_argument("-o", "--output", default=".", help="output directory")
    p_re.add_argument("--no-figure", action="store_true")
    p_re.add_argument("--tie-tol", type=float, default=None)
    p_re.set_defaults(func=cmd_rearrange)

    p_or = sub.add_parser("oracle", help="discretized knapsack optimum")
    p_or.add_argument("input", help="problem JSON file")
    p_or.add_argument("-o", "--output", default=".", help="output directory")
    _add_common(p_or)
    p_or.set_defaults(func=cmd_oracle)

    p_ver = sub.add_parser("verify",
                           help="run the property suite / check a schedule")
    p_ver.add_argument("input", nargs="?", default=None,
                       help="optional problem JSON file")
    p_ver.add_argument("--schedule", default=None,
                       help="schedule.json to check against the instance")
    p_ver.add_argument("--report", default=None,
                       help="report.json for cost round-trip checking")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--trials", type=int, default=20)
    _add_common(p_ver)
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NonFiniteError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
