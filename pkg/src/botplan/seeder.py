"""Single-type baseline: the most cost-effective instance type for a constraint."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .catalog import HOUR, Catalog, Number, exact
from .metrics import Allocation, horizon_capacity


class Infeasible(Exception):
    """No allocation can satisfy the constraint."""


@dataclass(frozen=True)
class Budget:
    amount: Fraction

    def __post_init__(self):
        object.__setattr__(self, "amount", exact(self.amount))

    kind = "budget"

    @property
    def value(self) -> Fraction:
        return self.amount


@dataclass(frozen=True)
class Deadline:
    seconds: Fraction

    def __post_init__(self):
        object.__setattr__(self, "seconds", exact(self.seconds))

    kind = "deadline"

    @property
    def value(self) -> Fraction:
        return self.seconds


Constraint = Budget | Deadline


@dataclass(frozen=True)
class SeedResult:
    chosen_type: str
    vm_count: int
    model_throughput: int
    model_cost: Fraction
    horizon: Fraction

    @property
    def allocation(self) -> Allocation:
        return {self.chosen_type: self.vm_count}


def _rank_key(catalog: Catalog, index: int) -> tuple:
    # lower hourly price first, then catalog order
    return (catalog.types[index].cost_per_hour, index)


def seed_budget(catalog: Catalog, budget: Number) -> SeedResult:
    budget = exact(budget)
    if budget <= 0:
        raise Infeasible(f"budget must be positive, got {budget}")
    best = None
    for i, it in enumerate(catalog):
        count = math.floor(budget / it.cost_per_hour)
        cap = horizon_capacity(it, HOUR, catalog.startup_seconds)
        if count < 1 or cap < 1:
            continue
        score = count * cap
        key = (-score, *_rank_key(catalog, i))
        if best is None or key < best[0]:
            best = (key, it, count, score)
    if best is None:
        cheapest = min(it.cost_per_hour for it in catalog)
        if budget < cheapest:
            raise Infeasible("budget below cheapest instance")
        raise Infeasible("startup time leaves no capacity within one hour")
    _, it, count, score = best
    return SeedResult(it.name, count, score, count * it.cost_per_hour, Fraction(HOUR))


def seed_deadline(catalog: Catalog, deadline: Number, n_tasks: int) -> SeedResult:
    deadline = exact(deadline)
    if n_tasks < 1:
        raise ValueError("n_tasks must be at least 1")
    hours = max(1, math.ceil(deadline / HOUR))
    best = None
    for i, it in enumerate(catalog):
        cap = horizon_capacity(it, deadline, catalog.startup_seconds)
        if cap < 1:
            continue
        count = -(-n_tasks // cap)
        price = count * it.cost_per_hour
        key = (price, *_rank_key(catalog, i))
        if best is None or key < best[0]:
            best = (key, it, count, cap)
    if best is None:
        raise Infeasible("deadline too short: no instance type completes a task in time")
    _, it, count, cap = best
    return SeedResult(it.name, count, count * cap, count * it.cost_per_hour * hours, deadline)


def seed(catalog: Catalog, constraint: Constraint, n_tasks: int) -> SeedResult:
    if isinstance(constraint, Budget):
        return seed_budget(catalog, constraint.amount)
    return seed_deadline(catalog, constraint.seconds, n_tasks)
