"""Multi-type refinement of a single-type seed allocation.

Starting from the seed type, repeatedly try to add VMs of other types with
the leftover budget, or swap ``num`` seed-type VMs for VMs of another type.
In budget mode a step must raise model throughput; in min-cost (deadline)
mode it must lower model cost while keeping throughput >= the task count.
When no candidate works, ``num`` grows by one; the run ends once the seed
type has fewer than ``num`` VMs left.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import HOUR, Catalog
from .metrics import Allocation, allocation_cost, allocation_throughput, horizon_capacity
from .seeder import Budget, Constraint, SeedResult

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Step:
    """One accepted replacement."""

    replacing_type: str
    removed: int
    added: int
    throughput: int
    model_cost: Fraction
    remaining_budget: Fraction


@dataclass
class OptimizeState:
    alloc: Allocation
    seed_type: str
    remaining_budget: Fraction
    horizon: Fraction
    n_tasks: int
    min_cost_mode: bool
    replace_count: int = 0
    current_throughput: int = 0


@dataclass
class OptimizeResult:
    alloc: Allocation
    steps: list[Step] = field(default_factory=list)
    iterations: int = 0
    bound: int = 0
    hit_cap: bool = False
    remaining_budget: Fraction = Fraction(0)


def iteration_bound(catalog: Catalog, seed: SeedResult, remaining_budget: Fraction) -> int:
    """Upper bound on loop iterations for a strict-improvement run.

    Rejected rounds raise ``num`` at most seed_count + 1 times. An accepted
    swap removes at least one seed VM; an accepted pure addition spends at
    least the cheapest hourly price, and the budget can be replenished by at
    most the seed VMs' value.
    """
    c_min = min(it.cost_per_hour for it in catalog)
    c0 = catalog[seed.chosen_type].cost_per_hour
    refill = remaining_budget + seed.vm_count * c0
    additions = math.floor(refill / c_min)
    return (seed.vm_count + 1) + seed.vm_count + additions + 1


def optimize(
    catalog: Catalog,
    seed: SeedResult,
    constraint: Constraint,
    n_tasks: int,
    *,
    strict_improvement: bool = True,
    max_iterations: int | None = None,
) -> OptimizeResult:
    """Refine ``seed`` into a multi-type allocation.

    ``strict_improvement=False`` restores the literal ``th' >= th`` acceptance
    in budget mode; the loop is then guarded only by ``max_iterations``.
    """
    min_cost = not isinstance(constraint, Budget)
    horizon = Fraction(HOUR) if not min_cost else seed.horizon
    st = catalog.startup_seconds
    it0 = catalog[seed.chosen_type]
    cap0 = horizon_capacity(it0, horizon, st)

    if min_cost:
        remaining = Fraction(0)
    else:
        remaining = constraint.amount - seed.vm_count * it0.cost_per_hour

    state = OptimizeState(
        alloc={seed.chosen_type: seed.vm_count},
        seed_type=seed.chosen_type,
        remaining_budget=remaining,
        horizon=horizon,
        n_tasks=n_tasks,
        min_cost_mode=min_cost,
        current_throughput=seed.vm_count * cap0,
    )
    bound = iteration_bound(catalog, seed, remaining)
    cap = max_iterations if max_iterations is not None else 100 * bound + 1000
    result = OptimizeResult(alloc=state.alloc, bound=bound)
    candidates = [(it, horizon_capacity(it, horizon, st)) for it in catalog if it is not it0]

    while True:
        seed_left = state.alloc.get(it0.name, 0)
        if seed_left == 0 or seed_left < state.replace_count:
            break
        if result.iterations >= cap:
            result.hit_cap = True
            log.warning("optimizer stopped at iteration cap %d", cap)
            break
        result.iterations += 1

        num = state.replace_count
        budget = state.remaining_budget
        th = state.current_throughput
        chosen = None  # (it, th', removed, added)
        for it1, cap1 in candidates:
            c1 = it1.cost_per_hour
            if c1 > budget + num * it0.cost_per_hour:
                continue
            removed = num if c1 > budget else 0
            allowance = budget + removed * it0.cost_per_hour
            added = math.floor(allowance / c1)
            if min_cost and added * c1 == allowance:
                added -= 1
            if added <= 0:
                continue
            new_th = th - cap0 * removed + cap1 * added
            if min_cost:
                if new_th < n_tasks:
                    continue
            elif new_th < th or (strict_improvement and new_th == th):
                continue
            if chosen is None or new_th > chosen[1] or (
                new_th == chosen[1] and c1 < chosen[0].cost_per_hour
            ):
                chosen = (it1, new_th, removed, added)

        if chosen is None:
            state.replace_count += 1
            continue

        it1, new_th, removed, added = chosen
        state.alloc[it0.name] = seed_left - removed
        state.alloc[it1.name] = state.alloc.get(it1.name, 0) + added
        if min_cost:
            state.remaining_budget = Fraction(0)
        else:
            state.remaining_budget = (
                budget + removed * it0.cost_per_hour - added * it1.cost_per_hour
            )
        state.current_throughput = new_th
        result.steps.append(
            Step(
                it1.name,
                removed,
                added,
                new_th,
                allocation_cost(state.alloc, catalog, horizon),
                state.remaining_budget,
            )
        )

    result.alloc = {n: state.alloc[n] for n in catalog.names if state.alloc.get(n, 0) > 0}
    result.remaining_budget = state.remaining_budget
    assert allocation_throughput(result.alloc, catalog, horizon) == state.current_throughput
    return result
