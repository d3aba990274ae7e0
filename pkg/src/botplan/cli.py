"""Command-line entry point: ``botplan {plan,tradeoff,sweep,oracle}``.

Exit codes: 0 success, 1 usage or input error, 2 infeasible constraint,
3 constraint violated under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .catalog import (
    SCENARIO_IDS,
    CatalogError,
    builtin_scenario,
    classify_tradeoff,
    exact,
    load_catalog,
    tradeoff_matrix,
)
from .harness import (
    DEFAULT_TASKS,
    PlanReport,
    make_constraint,
    plan_multi,
    plan_single,
    rows_to_csv,
    scenario_sweep,
    sweep,
)
from .metrics import vm_cost
from .oracle import SearchSpaceTooLarge, oracle_budget, oracle_deadline
from .seeder import Budget, Infeasible

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(value: Fraction):
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else float(value)


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _exact_arg(text):
    try:
        return exact(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _add_catalog_args(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--catalog", metavar="PATH", help="catalog CSV file")
    g.add_argument("--scenario", type=int, choices=SCENARIO_IDS, help="built-in scenario")
    p.add_argument("--startup", type=_exact_arg, default=Fraction(10), metavar="SECONDS")


def _add_constraint_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--budget", type=_exact_arg, metavar="X")
    g.add_argument("--deadline", type=_exact_arg, metavar="SECONDS")
    p.add_argument("--tasks", type=_positive_int, default=DEFAULT_TASKS, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="botplan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("plan", help="build an execution plan")
    _add_catalog_args(p)
    _add_constraint_args(p)
    p.add_argument("--single-type", action="store_true", help="seed type only, no refinement")
    p.add_argument("--strict", action="store_true", help="exit 3 if the plan breaks the constraint")
    p.add_argument("--compat-nonstrict-improvement", action="store_true",
                   help="accept equal-throughput replacements in budget mode")
    p.add_argument("--oracle", action="store_true", help="also report the exhaustive optimum")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("tradeoff", help="pairwise trade-off ratios")
    _add_catalog_args(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("sweep", help="single vs multi-type comparison CSV")
    _add_catalog_args(p, required=False)
    p.add_argument("--kind", choices=("budget", "deadline", "both"), default="both")
    p.add_argument("--grid", metavar="v1,v2,...")
    p.add_argument("--tasks", type=_positive_int, default=DEFAULT_TASKS, metavar="N")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("oracle", help="exhaustive optimum for small catalogs")
    _add_catalog_args(p)
    _add_constraint_args(p)
    p.add_argument("--bound", type=int, metavar="K", help="per-type VM count cap")
    p.add_argument("--single-type", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", metavar="PATH")
    return parser


def _catalog(args):
    if args.catalog:
        return load_catalog(args.catalog, args.startup)
    return builtin_scenario(args.scenario, args.startup)


def _constraint(args):
    if args.budget is not None:
        return make_constraint("budget", args.budget)
    return make_constraint("deadline", args.deadline)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def plan_document(report: PlanReport, catalog, mode: str) -> dict:
    c = report.constraint
    vms = []
    for vm, ex in zip(report.plan.vms, report.plan.exec_times(catalog)):
        vms.append({
            "type": vm.type_name,
            "tasks": vm.tasks,
            "exec": _num(ex),
            "cost": _num(vm_cost(ex, catalog[vm.type_name])),
        })
    doc = {
        "constraint": {"kind": c.kind, "value": _num(c.value)},
        "n_tasks": report.n_tasks,
        "mode": mode,
        "startup": _num(catalog.startup_seconds),
        "allocation": dict(report.plan.type_counts()),
        "vms": vms,
        "makespan": _num(report.metrics.makespan),
        "billed_cost": _num(report.metrics.billed_cost),
        "model_throughput": report.model_throughput,
        "model_cost": _num(report.model_cost),
        "horizon": _num(report.horizon),
        "seed": {"type": report.seed.chosen_type, "vm_count": report.seed.vm_count},
        "warnings": list(report.warnings),
    }
    if report.optimized is not None:
        doc["optimizer"] = {
            "iterations": report.optimized.iterations,
            "bound": report.optimized.bound,
            "steps": [
                {"type": s.replacing_type, "removed": s.removed, "added": s.added,
                 "throughput": s.throughput, "model_cost": _num(s.model_cost)}
                for s in report.optimized.steps
            ],
        }
    return doc


def format_plan(doc: dict) -> str:
    c = doc["constraint"]
    unit = " s" if c["kind"] == "deadline" else ""
    lines = [
        f"constraint: {c['kind']} {c['value']}{unit}    tasks: {doc['n_tasks']}    "
        f"mode: {doc['mode']}",
        "",
        f"{'type':<14}{'vms':>5}",
    ]
    for name, count in doc["allocation"].items():
        lines.append(f"{name:<14}{count:>5}")
    lines += ["", f"{'vm':>4}  {'type':<14}{'tasks':>7}{'exec (s)':>12}{'cost':>10}"]
    for i, vm in enumerate(doc["vms"]):
        lines.append(
            f"{i:>4}  {vm['type']:<14}{vm['tasks']:>7}{vm['exec']:>12g}{vm['cost']:>10g}"
        )
    lines += [
        "",
        f"makespan:         {doc['makespan']:g} s",
        f"billed cost:      {doc['billed_cost']:g}",
        f"model throughput: {doc['model_throughput']} (horizon {doc['horizon']:g} s)",
        f"model cost:       {doc['model_cost']:g}",
        "warnings:         " + ("; ".join(doc["warnings"]) if doc["warnings"] else "none"),
    ]
    if "oracle" in doc:
        o = doc["oracle"]
        lines.append(
            f"oracle optimum:   {o['objective']:g} with {o['allocation']} "
            f"({o['explored']} vectors)"
        )
    return "\n".join(lines) + "\n"


def _oracle_doc(catalog, constraint, n_tasks, bound=None, single_type=False) -> dict:
    if isinstance(constraint, Budget):
        res = oracle_budget(catalog, constraint.amount, bound, single_type=single_type)
        objective = "throughput"
    else:
        res = oracle_deadline(catalog, constraint.seconds, n_tasks, bound,
                              single_type=single_type)
        objective = "cost"
    return {
        "constraint": {"kind": constraint.kind, "value": _num(constraint.value)},
        "objective_kind": objective,
        "objective": _num(res.best_objective),
        "allocation": res.best_alloc,
        "model_cost": _num(res.model_cost),
        "model_throughput": res.model_throughput,
        "explored": res.explored,
    }


def cmd_plan(args) -> int:
    catalog = _catalog(args)
    constraint = _constraint(args)
    if args.single_type:
        report = plan_single(catalog, constraint, args.tasks)
        mode = "single-type"
    else:
        report = plan_multi(catalog, constraint, args.tasks,
                            strict_improvement=not args.compat_nonstrict_improvement)
        mode = "multi-type"
    doc = plan_document(report, catalog, mode)
    if args.oracle:
        doc["oracle"] = _oracle_doc(catalog, constraint, args.tasks)
    _emit(json.dumps(doc, indent=2) + "\n" if args.json else format_plan(doc), args.out)
    if args.strict and report.warnings:
        print("constraint violated: " + "; ".join(report.warnings), file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_tradeoff(args) -> int:
    catalog = _catalog(args)
    matrix = tradeoff_matrix(catalog)
    names = catalog.names
    if args.json:
        doc = {"types": names,
               "ratios": [[None if r is None else float(r) for r in row] for row in matrix]}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return EXIT_OK
    width = max(12, max(len(n) for n in names) + 2)
    lines = ["cheap \\ expensive".ljust(width) + "".join(n.rjust(width) for n in names)]
    for name, row in zip(names, matrix):
        cells = ["-" if r is None else f"{float(r):.4g}" for r in row]
        lines.append(name.ljust(width) + "".join(c.rjust(width) for c in cells))
    lines.append("")
    for i, a in enumerate(catalog):
        for j, b in enumerate(catalog):
            r = matrix[i][j]
            if i != j and r is not None:
                lines.append(f"{a.name} -> {b.name}: {float(r):.4g} ({classify_tradeoff(r)})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    kinds = ("budget", "deadline") if args.kind == "both" else (args.kind,)
    grid = None
    if args.grid:
        if args.kind == "both":
            raise UsageError("--grid needs --kind budget or --kind deadline")
        try:
            grid = [exact(v.strip()) for v in args.grid.split(",") if v.strip()]
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad --grid value: {args.grid!r}") from None
        if not grid:
            raise UsageError("--grid is empty")
    rows = []
    if args.catalog:
        catalog = load_catalog(args.catalog, args.startup)
        for kind in kinds:
            if grid is None:
                raise UsageError("--grid is required with --catalog")
            rows += sweep(catalog, [make_constraint(kind, v) for v in grid], args.tasks,
                          "custom")
    else:
        ids = (args.scenario,) if args.scenario else SCENARIO_IDS
        for sid in ids:
            for kind in kinds:
                rows += scenario_sweep(sid, kind, grid, args.tasks, args.startup)
    _emit(rows_to_csv(rows), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    catalog = _catalog(args)
    doc = _oracle_doc(catalog, _constraint(args), args.tasks, args.bound, args.single_type)
    if args.json:
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = (
            f"{doc['objective_kind']} optimum: {doc['objective']:g}\n"
            f"allocation: {doc['allocation']}\n"
            f"model cost: {doc['model_cost']:g}    model throughput: {doc['model_throughput']}\n"
            f"explored: {doc['explored']}\n"
        )
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"plan": cmd_plan, "tradeoff": cmd_tradeoff, "sweep": cmd_sweep, "oracle": cmd_oracle}


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (UsageError, CatalogError, SearchSpaceTooLarge, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
