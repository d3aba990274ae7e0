"""Exhaustive reference solver over VM-count vectors for small catalogs.

Optimizes the throughput model directly (max throughput under a budget, min
cost under a deadline), so it certifies the model-level optimum the heuristic
is aiming at. Enumeration is split on the leading coordinate and vectorized
over the rest with integer-scaled costs, keeping comparisons exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .catalog import HOUR, Catalog, Number, exact
from .metrics import Allocation, horizon_capacity
from .seeder import Infeasible

MAX_TYPES = 5
MAX_SPACE = 10**7


class SearchSpaceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    best_alloc: Allocation
    best_objective: Fraction | int
    explored: int
    model_cost: Fraction
    model_throughput: int


def _scale(values: list[Fraction]) -> int:
    return math.lcm(*(v.denominator for v in values))


def _bounds(defaults: list[int], bound_per_type: int | None) -> list[int]:
    if bound_per_type is None:
        return defaults
    return [min(d, bound_per_type) for d in defaults]


def _guard(catalog: Catalog, bounds: list[int]) -> int:
    if len(catalog) > MAX_TYPES:
        raise SearchSpaceTooLarge(f"oracle limited to {MAX_TYPES} types, got {len(catalog)}")
    space = math.prod(b + 1 for b in bounds)
    if space > MAX_SPACE:
        raise SearchSpaceTooLarge(f"search space {space} exceeds {MAX_SPACE}")
    return space


def _search(bounds, caps, costs, better, feasible):
    """Return the best count vector in lexicographic enumeration order.

    ``feasible(th, cost)`` yields a boolean mask; ``better`` picks the index
    of the best entry among a masked chunk and compares chunk winners.
    """
    caps = np.asarray(caps, dtype=np.int64)
    costs = np.asarray(costs, dtype=np.int64)
    rest_shape = tuple(b + 1 for b in bounds[1:])
    rest = np.indices(rest_shape).reshape(len(rest_shape), -1).T if rest_shape else np.zeros((1, 0), np.int64)
    rest_th = rest @ caps[1:]
    rest_cost = rest @ costs[1:]
    rest_nonzero = rest.any(axis=1)
    best = None
    for lead in range(bounds[0] + 1):
        th = rest_th + lead * caps[0]
        cost = rest_cost + lead * costs[0]
        mask = feasible(th, cost) & (rest_nonzero | (lead > 0))
        if not mask.any():
            continue
        idx = better.pick(th, cost, mask)
        cand = (int(th[idx]), int(cost[idx]), (lead, *map(int, rest[idx])))
        if best is None or better.beats(cand, best):
            best = cand
    return best


class _MaxThroughput:
    @staticmethod
    def pick(th, cost, mask):
        top = th[mask].max()
        m2 = mask & (th == top)
        low = cost[m2].min()
        return int(np.flatnonzero(m2 & (cost == low))[0])

    @staticmethod
    def beats(a, b):
        return (a[0], -a[1]) > (b[0], -b[1])


class _MinCost:
    @staticmethod
    def pick(th, cost, mask):
        low = cost[mask].min()
        return int(np.flatnonzero(mask & (cost == low))[0])

    @staticmethod
    def beats(a, b):
        return a[1] < b[1]


def _single_type(bounds, caps, costs, better, feasible):
    # vectors with exactly one non-zero entry, in lexicographic order
    vectors = []
    for i, b in enumerate(bounds):
        for k in range(1, b + 1):
            v = [0] * len(bounds)
            v[i] = k
            vectors.append(tuple(v))
    vectors.sort()
    best = None
    for v in vectors:
        th = sum(k * c for k, c in zip(v, caps))
        cost = sum(k * c for k, c in zip(v, costs))
        if not feasible(np.array([th]), np.array([cost]))[0]:
            continue
        cand = (th, cost, v)
        if best is None or better.beats(cand, best):
            best = cand
    return best, len(vectors)


def _result(catalog, vector, th, cost_int, scale, hours, explored, objective_is_cost):
    alloc = {n: k for n, k in zip(catalog.names, vector) if k > 0}
    cost = Fraction(cost_int, scale) * hours
    return OracleResult(alloc, cost if objective_is_cost else th, explored, cost, th)


def oracle_budget(
    catalog: Catalog,
    budget: Number,
    bound_per_type: int | None = None,
    *,
    single_type: bool = False,
) -> OracleResult:
    budget = exact(budget)
    prices = [it.cost_per_hour for it in catalog]
    scale = _scale(prices + [budget])
    costs = [int(p * scale) for p in prices]
    limit = int(budget * scale)
    caps = [horizon_capacity(it, HOUR, catalog.startup_seconds) for it in catalog]
    bounds = _bounds([math.floor(budget / p) if budget > 0 else 0 for p in prices], bound_per_type)

    def feasible(th, cost):
        return cost <= limit

    if single_type:
        best, explored = _single_type(bounds, caps, costs, _MaxThroughput, feasible)
    else:
        explored = _guard(catalog, bounds)
        best = _search(bounds, caps, costs, _MaxThroughput, feasible)
    if best is None:
        raise Infeasible("no feasible non-empty allocation within budget")
    th, cost_int, vector = best
    return _result(catalog, vector, th, cost_int, scale, 1, explored, False)


def oracle_deadline(
    catalog: Catalog,
    deadline: Number,
    n_tasks: int,
    bound_per_type: int | None = None,
    *,
    single_type: bool = False,
) -> OracleResult:
    deadline = exact(deadline)
    prices = [it.cost_per_hour for it in catalog]
    scale = _scale(prices)
    costs = [int(p * scale) for p in prices]
    caps = [horizon_capacity(it, deadline, catalog.startup_seconds) for it in catalog]
    bounds = _bounds([-(-n_tasks // c) if c > 0 else 0 for c in caps], bound_per_type)
    hours = max(1, math.ceil(deadline / HOUR))

    def feasible(th, cost):
        return th >= n_tasks

    if not any(bounds):
        raise Infeasible("no feasible non-empty allocation within deadline")
    if single_type:
        best, explored = _single_type(bounds, caps, costs, _MinCost, feasible)
    else:
        explored = _guard(catalog, bounds)
        best = _search(bounds, caps, costs, _MinCost, feasible)
    if best is None:
        raise Infeasible("no feasible non-empty allocation within deadline")
    th, cost_int, vector = best
    return _result(catalog, vector, th, cost_int, scale, hours, explored, True)
