"""Single-type vs multi-type planning and the scenario sweep."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .assigner import ExecutionPlan, assign
from .catalog import Catalog, Number, builtin_scenario, exact
from .metrics import (
    Allocation,
    PlanMetrics,
    allocation_cost,
    allocation_throughput,
    plan_metrics,
)
from .optimizer import OptimizeResult, optimize
from .seeder import Budget, Constraint, Deadline, Infeasible, SeedResult, seed

DEFAULT_TASKS = 1000
DEADLINE_GRID = (600, 900, 1200, 1500, 1800, 2100, 2400, 2700, 3000, 3600)
BUDGET_GRID = (2, 4, 6, 8, 10, 12, 16, 20, 24, 32)
BUDGET_GRID_MIXED = ("0.3", "0.5", "0.8", "1.0", "1.5", "2.0", "2.5", "3.0", "4.0", "5.0")

CSV_HEADER = (
    "scenario", "kind", "value", "single_cost", "single_makespan",
    "multi_cost", "multi_makespan", "ratio", "warnings",
)


class ConstraintViolation(Exception):
    """The evaluated plan breaks the user's constraint."""


@dataclass
class PlanReport:
    constraint: Constraint
    n_tasks: int
    alloc: Allocation
    plan: ExecutionPlan
    metrics: PlanMetrics
    model_throughput: int
    model_cost: Fraction
    horizon: Fraction
    seed: SeedResult
    optimized: OptimizeResult | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return bool(self.warnings)


def default_budget_grid(scenario_id: int) -> tuple[Fraction, ...]:
    grid = BUDGET_GRID_MIXED if scenario_id == 4 else BUDGET_GRID
    return tuple(exact(v) for v in grid)


def default_deadline_grid() -> tuple[Fraction, ...]:
    return tuple(exact(v) for v in DEADLINE_GRID)


def _evaluate(catalog, constraint, n_tasks, seed_result, alloc, optimized, strict):
    plan = assign(n_tasks, alloc, catalog).pruned()
    metrics = plan_metrics(plan, catalog)
    warnings = []
    if isinstance(constraint, Budget):
        if metrics.billed_cost > constraint.amount:
            warnings.append(
                f"billed cost {float(metrics.billed_cost):g} exceeds budget "
                f"{float(constraint.amount):g}"
            )
    elif metrics.makespan > constraint.seconds:
        warnings.append(
            f"makespan {float(metrics.makespan):g} exceeds deadline "
            f"{float(constraint.seconds):g}"
        )
    horizon = seed_result.horizon
    report = PlanReport(
        constraint,
        n_tasks,
        alloc,
        plan,
        metrics,
        allocation_throughput(alloc, catalog, horizon),
        allocation_cost(alloc, catalog, horizon),
        horizon,
        seed_result,
        optimized,
        warnings,
    )
    if strict and warnings:
        raise ConstraintViolation("; ".join(warnings))
    return report


def plan_single(
    catalog: Catalog, constraint: Constraint, n_tasks: int = DEFAULT_TASKS, *, strict=False
) -> PlanReport:
    """Seed allocation only, assigned greedily."""
    s = seed(catalog, constraint, n_tasks)
    return _evaluate(catalog, constraint, n_tasks, s, s.allocation, None, strict)


def plan_multi(
    catalog: Catalog,
    constraint: Constraint,
    n_tasks: int = DEFAULT_TASKS,
    *,
    strict=False,
    strict_improvement=True,
) -> PlanReport:
    """Seed, refine across instance types, then assign."""
    s = seed(catalog, constraint, n_tasks)
    opt = optimize(catalog, s, constraint, n_tasks, strict_improvement=strict_improvement)
    return _evaluate(catalog, constraint, n_tasks, s, opt.alloc, opt, strict)


@dataclass
class SweepRow:
    scenario_id: int | str
    constraint_kind: str
    constraint_value: Fraction
    single_cost: Fraction | None = None
    single_makespan: Fraction | None = None
    multi_cost: Fraction | None = None
    multi_makespan: Fraction | None = None
    ratio: Fraction | None = None
    warnings: list[str] = field(default_factory=list)
    single: PlanReport | None = field(default=None, repr=False)
    multi: PlanReport | None = field(default=None, repr=False)


def make_constraint(kind: str, value: Number) -> Constraint:
    if kind == "budget":
        return Budget(exact(value))
    if kind == "deadline":
        return Deadline(exact(value))
    raise ValueError(f"unknown constraint kind {kind!r}")


def sweep_point(catalog, constraint, n_tasks, scenario_id="custom") -> SweepRow:
    row = SweepRow(scenario_id, constraint.kind, constraint.value)
    try:
        single = plan_single(catalog, constraint, n_tasks)
        multi = plan_multi(catalog, constraint, n_tasks)
    except Infeasible as exc:
        row.warnings.append(f"infeasible: {exc}")
        return row
    row.single, row.multi = single, multi
    row.single_cost = single.metrics.billed_cost
    row.single_makespan = single.metrics.makespan
    row.multi_cost = multi.metrics.billed_cost
    row.multi_makespan = multi.metrics.makespan
    if constraint.kind == "budget":
        row.ratio = single.metrics.makespan / multi.metrics.makespan
    else:
        row.ratio = single.metrics.billed_cost / multi.metrics.billed_cost
    row.warnings += [f"single: {w}" for w in single.warnings]
    row.warnings += [f"multi: {w}" for w in multi.warnings]
    return row


def sweep(
    catalog: Catalog,
    constraint_grid: Sequence[Constraint],
    n_tasks: int = DEFAULT_TASKS,
    scenario_id: int | str = "custom",
) -> list[SweepRow]:
    if not constraint_grid:
        raise ValueError("constraint grid is empty")
    return [sweep_point(catalog, c, n_tasks, scenario_id) for c in constraint_grid]


def scenario_sweep(
    scenario_id: int,
    kind: str,
    grid: Iterable[Number] | None = None,
    n_tasks: int = DEFAULT_TASKS,
    startup: Number = 10,
) -> list[SweepRow]:
    catalog = builtin_scenario(scenario_id, startup)
    if grid is None:
        grid = default_budget_grid(scenario_id) if kind == "budget" else default_deadline_grid()
    return sweep(catalog, [make_constraint(kind, v) for v in grid], n_tasks, scenario_id)


def _fmt(value) -> str:
    if value is None:
        return ""
    return f"{float(value):.6g}"


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            r.scenario_id, r.constraint_kind, _fmt(r.constraint_value),
            _fmt(r.single_cost), _fmt(r.single_makespan),
            _fmt(r.multi_cost), _fmt(r.multi_makespan),
            _fmt(r.ratio), ";".join(r.warnings),
        ])
    return buf.getvalue()


def read_sweep_csv(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))
