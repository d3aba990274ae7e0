"""Cost and time model: per-VM execution/billing and the throughput model."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Mapping

from .catalog import HOUR, Catalog, InstanceType, Number, exact

if TYPE_CHECKING:
    from .assigner import ExecutionPlan

Allocation = dict[str, int]


@dataclass(frozen=True)
class PlanMetrics:
    makespan: Fraction
    billed_cost: Fraction
    total_throughput: int


def billed_hours(exec_seconds: Number) -> int:
    return math.ceil(exact(exec_seconds) / HOUR)


def vm_exec_time(task_count: int, it: InstanceType, startup: Number) -> Fraction:
    """Busy time of one VM; an empty VM is pruned and costs no time at all."""
    if task_count < 0:
        raise ValueError("task_count must be non-negative")
    if task_count == 0:
        return Fraction(0)
    return task_count * it.seconds_per_task + exact(startup)


def vm_cost(exec_seconds: Number, it: InstanceType) -> Fraction:
    exec_seconds = exact(exec_seconds)
    if exec_seconds < 0:
        raise ValueError("exec time must be non-negative")
    if exec_seconds == 0:
        return Fraction(0)
    return billed_hours(exec_seconds) * it.cost_per_hour


def plan_metrics(plan: "ExecutionPlan", catalog: Catalog) -> PlanMetrics:
    makespan = Fraction(0)
    cost = Fraction(0)
    tasks = 0
    for vm in plan.vms:
        try:
            it = catalog[vm.type_name]
        except KeyError:
            raise KeyError(f"plan references unknown instance type {vm.type_name!r}") from None
        if vm.tasks == 0:
            continue
        exec_time = vm_exec_time(vm.tasks, it, catalog.startup_seconds)
        makespan = max(makespan, exec_time)
        cost += vm_cost(exec_time, it)
        tasks += vm.tasks
    return PlanMetrics(makespan, cost, tasks)


def horizon_capacity(it: InstanceType, horizon: Number, startup: Number) -> int:
    """Whole tasks one VM finishes within ``horizon`` seconds after booting."""
    usable = exact(horizon) - exact(startup)
    if usable <= 0:
        return 0
    return math.floor(usable / it.seconds_per_task)


def check_allocation(alloc: Mapping[str, int], catalog: Catalog) -> None:
    names = set(catalog.names)
    for name, count in alloc.items():
        if name not in names:
            raise KeyError(f"allocation references unknown instance type {name!r}")
        if count < 0:
            raise ValueError(f"negative VM count for {name!r}: {count}")


def normalize_allocation(alloc: Mapping[str, int], catalog: Catalog) -> Allocation:
    """Catalog-ordered copy with zero counts dropped."""
    check_allocation(alloc, catalog)
    return {name: alloc[name] for name in catalog.names if alloc.get(name, 0) > 0}


def allocation_throughput(alloc: Mapping[str, int], catalog: Catalog, horizon: Number) -> int:
    check_allocation(alloc, catalog)
    return sum(
        count * horizon_capacity(catalog[name], horizon, catalog.startup_seconds)
        for name, count in alloc.items()
    )


def allocation_cost(alloc: Mapping[str, int], catalog: Catalog, horizon: Number) -> Fraction:
    """Model cost: every VM billed for the whole horizon (one hour when horizon <= 3600)."""
    check_allocation(alloc, catalog)
    hours = max(1, billed_hours(horizon))
    return sum(
        (count * catalog[name].cost_per_hour * hours for name, count in alloc.items()),
        Fraction(0),
    )
