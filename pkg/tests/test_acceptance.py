"""Exit criteria for the planner. Each test records one PASS/FAIL line,
printed at the end of the pytest run."""

import json
import pathlib
import random
import time
from fractions import Fraction

import pytest

from botplan.assigner import assign, pick_vm
from botplan.catalog import SCENARIO_IDS, Catalog, InstanceType, builtin_scenario, tradeoff_ratio
from botplan.harness import plan_multi, plan_single, scenario_sweep
from botplan.metrics import (
    allocation_cost,
    allocation_throughput,
    horizon_capacity,
    plan_metrics,
)
from botplan.optimizer import optimize
from botplan.oracle import oracle_budget, oracle_deadline
from botplan.seeder import Budget, Deadline, seed_budget, seed_deadline

GOLDEN = pathlib.Path(__file__).parent / "golden"
RESULTS: list[str] = []


def record(label, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


def all_sweeps():
    rows = []
    for sid in SCENARIO_IDS:
        for kind in ("budget", "deadline"):
            rows += scenario_sweep(sid, kind)
    return rows


def random_catalog(rng, n_types):
    types = [
        InstanceType(f"t{i}", Fraction(rng.randint(1, 16)), Fraction(rng.randint(1, 64)))
        for i in range(n_types)
    ]
    return Catalog(tuple(types), Fraction(10))


def random_oracle_cases(count=200, seed=20151):
    """Catalogs with 2-4 types where every default per-type bound is <= 12."""
    rng = random.Random(seed)
    cases = []
    while len(cases) < count:
        cat = random_catalog(rng, rng.randint(2, 4))
        c_min = min(it.cost_per_hour for it in cat)
        budget = Fraction(rng.randint(int(c_min), 13 * int(c_min) - 1))
        deadline = rng.randint(11, 3600)
        caps = [horizon_capacity(it, deadline, 10) for it in cat if horizon_capacity(it, deadline, 10) > 0]
        if not caps:
            continue
        n = rng.randint(1, min(500, 12 * min(caps)))
        cases.append((cat, budget, deadline, n))
    return cases


def test_ac1_scenario1_deadline_trace():
    cat = builtin_scenario(1)
    start = time.perf_counter()
    single = plan_single(cat, Deadline(1800), 1000)
    multi = plan_multi(cat, Deadline(1800), 1000)
    elapsed = time.perf_counter() - start
    ok = (
        single.plan.type_counts() == {"it1": 19}
        and single.metrics.makespan == 1706
        and single.metrics.billed_cost == 19
        and multi.plan.type_counts() == {"it1": 2, "it5": 1}
        and multi.metrics.billed_cost == 18
        and multi.metrics.makespan == 1790
        and multi.metrics.makespan <= 1800
        and elapsed < 1.0
    )
    record(
        "AC1 scenario-1 deadline-1800 trace",
        ok,
        f"single {single.plan.type_counts()} {single.metrics.makespan}s/{single.metrics.billed_cost}; "
        f"multi {multi.plan.type_counts()} {multi.metrics.makespan}s/{multi.metrics.billed_cost}; "
        f"{elapsed * 1000:.1f} ms",
    )


def test_ac2_seed_arithmetic():
    cat = builtin_scenario(1)
    caps = [horizon_capacity(it, 3600, cat.startup_seconds) for it in cat]
    s = seed_deadline(cat, 1800, 1000)
    ok = caps == [112, 224, 448, 897, 1795] and (s.chosen_type, s.vm_count) == ("it1", 19)
    record("AC2 seed arithmetic", ok, f"capacities {caps}, seed ({s.chosen_type}, {s.vm_count})")


def test_ac3_tradeoff_ratios():
    t4 = builtin_scenario(4)
    r1 = float(tradeoff_ratio(t4["M3.Medium"], t4["C3.Large"]))
    r2 = float(tradeoff_ratio(t4["C3.Large"], t4["M3.Large"]))
    r3 = float(tradeoff_ratio(t4["C3.Large"], t4["C3.Xlarge"]))
    t1 = list(builtin_scenario(1))
    fair = [tradeoff_ratio(a, b) for a, b in zip(t1, t1[1:])]
    ok = (
        abs(r1 - 2.2) <= 0.05
        and abs(r2 - 0.7) <= 0.05
        and abs(r3 - 1.002) <= 0.002
        and all(r == 1 for r in fair)
    )
    record("AC3 trade-off ratios", ok, f"{r1:.4f}, {r2:.4f}, {r3:.4f}; table I adjacent {fair}")


def test_ac4_constraint_satisfaction_sweep():
    start = time.perf_counter()
    rows = all_sweeps()
    elapsed = time.perf_counter() - start
    violations = []
    for r in rows:
        if r.ratio is None:
            continue
        for label, rep in (("single", r.single), ("multi", r.multi)):
            if r.constraint_kind == "deadline" and rep.metrics.makespan > r.constraint_value:
                violations.append((r.scenario_id, r.constraint_value, label, "makespan"))
            if (
                r.constraint_kind == "budget"
                and rep.model_throughput >= rep.n_tasks
                and rep.metrics.billed_cost > r.constraint_value
            ):
                violations.append((r.scenario_id, r.constraint_value, label, "cost"))
    ok = len(rows) == 80 and not violations and elapsed < 10
    record("AC4 constraint satisfaction over 80 runs", ok,
           f"{len(violations)} violations, {elapsed:.2f} s")


def test_ac5_never_worse():
    rows = all_sweeps()
    exceptions = json.loads((GOLDEN / "budget_ratio_exceptions.json").read_text())["points"]
    documented = {(p["scenario"], Fraction(p["budget"])): float(p["ratio"]) for p in exceptions}
    below_one = [r for r in rows if r.ratio is None or r.ratio < 1]
    s3_budget = any(r.ratio > 1 for r in rows if r.scenario_id == 3 and r.constraint_kind == "budget")
    s3_deadline = any(r.ratio > 1 for r in rows if r.scenario_id == 3 and r.constraint_kind == "deadline")
    undocumented = []
    for r in rows:
        if r.scenario_id in (1, 2, 4) and r.constraint_kind == "budget":
            key = (r.scenario_id, r.constraint_value)
            if key in documented:
                if abs(float(r.ratio) - documented[key]) > 5e-6:
                    undocumented.append(key)
            elif r.ratio != 1:
                undocumented.append(key)
    ok = not below_one and s3_budget and s3_deadline and not undocumented
    record("AC5 never-worse ratios", ok,
           f"min ratio {min(float(r.ratio) for r in rows):.4f}; "
           f"documented budget exceptions {len(documented)}; undocumented {undocumented}")


def test_ac6_oracle_equivalence():
    start = time.perf_counter()
    failures = []
    for i, (cat, budget, deadline, n) in enumerate(random_oracle_cases()):
        # budget mode
        s = seed_budget(cat, budget)
        single = oracle_budget(cat, budget, single_type=True)
        full = oracle_budget(cat, budget)
        if any(budget // it.cost_per_hour > 12 for it in cat):
            failures.append((i, "budget bound > 12"))
        if s.model_throughput != single.best_objective:
            failures.append((i, "budget seed != single-type oracle"))
        opt = optimize(cat, s, Budget(budget), n)
        th = allocation_throughput(opt.alloc, cat, 3600)
        if allocation_cost(opt.alloc, cat, 3600) > budget:
            failures.append((i, "budget heuristic infeasible"))
        if not s.model_throughput <= th <= full.best_objective:
            failures.append((i, "budget objective out of range"))

        # deadline mode
        s = seed_deadline(cat, deadline, n)
        single = oracle_deadline(cat, deadline, n, single_type=True)
        full = oracle_deadline(cat, deadline, n)
        if s.model_cost != single.best_objective:
            failures.append((i, "deadline seed != single-type oracle"))
        opt = optimize(cat, s, Deadline(deadline), n)
        cost = allocation_cost(opt.alloc, cat, deadline)
        if allocation_throughput(opt.alloc, cat, deadline) < n:
            failures.append((i, "deadline heuristic infeasible"))
        if not full.best_objective <= cost <= s.model_cost:
            failures.append((i, "deadline objective out of range"))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    record("AC6 oracle equivalence on 200 random catalogs", ok,
           f"{len(failures)} failures {failures[:3]}, {elapsed:.2f} s")


def test_ac7_assigner_properties():
    rng = random.Random(7)
    failures = []
    checked = 0
    while checked < 500:
        cat = random_catalog(rng, rng.randint(1, 4))
        alloc = {it.name: rng.randint(0, 6) for it in cat}
        alloc = {k: v for k, v in alloc.items() if v}
        horizon = rng.randint(11, 7200)
        cap = allocation_throughput(alloc, cat, horizon)
        if not alloc or cap < 1:
            continue
        n = rng.randint(1, min(cap, 2000))
        plan = assign(n, alloc, cat)
        if plan_metrics(plan, cat).makespan > horizon:
            failures.append(("makespan", checked))
        for name in alloc:
            loads = [vm.tasks for vm in plan.vms if vm.type_name == name]
            if max(loads) - min(loads) > 1:
                failures.append(("balance", checked))
        checked += 1
    example = pick_vm([10, 12, 9], [5, 5, 8])
    ok = not failures and example == 0
    record("AC7 assigner properties over 500 instances", ok,
           f"{len(failures)} failures; worked example -> VM {example + 1}")


def test_ac8_termination():
    runs = []
    for r in all_sweeps():
        if r.multi is not None:
            runs.append(r.multi.optimized)
    for cat, budget, deadline, n in random_oracle_cases():
        runs.append(optimize(cat, seed_budget(cat, budget), Budget(budget), n))
        runs.append(optimize(cat, seed_deadline(cat, deadline, n), Deadline(deadline), n))
    over = [r for r in runs if r.iterations > r.bound]
    capped = [r for r in runs if r.hit_cap]
    ok = not over and not capped
    worst = max(r.iterations / r.bound for r in runs)
    record("AC8 optimizer termination", ok,
           f"{len(runs)} runs, {len(over)} over bound, {len(capped)} capped, "
           f"max iterations/bound {worst:.2f}")
