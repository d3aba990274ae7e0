"""Greedy assignment of identical tasks to provisioned VMs.

Each task goes to the VM on which it would finish earliest; ties go to the
lowest VM index. VMs are laid out grouped by type in catalog order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .catalog import Catalog
from .metrics import check_allocation, vm_exec_time


@dataclass(frozen=True)
class VM:
    type_name: str
    tasks: int = 0


@dataclass(frozen=True)
class ExecutionPlan:
    vms: tuple[VM, ...]
    # VM index chosen for each task, in assignment order
    sequence: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @property
    def n_tasks(self) -> int:
        return sum(vm.tasks for vm in self.vms)

    def pruned(self) -> "ExecutionPlan":
        keep = [i for i, vm in enumerate(self.vms) if vm.tasks > 0]
        remap = {old: new for new, old in enumerate(keep)}
        return ExecutionPlan(
            tuple(self.vms[i] for i in keep), tuple(remap[i] for i in self.sequence)
        )

    def type_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for vm in self.vms:
            if vm.tasks > 0:
                counts[vm.type_name] = counts.get(vm.type_name, 0) + 1
        return counts

    def exec_times(self, catalog: Catalog) -> list[Fraction]:
        return [
            vm_exec_time(vm.tasks, catalog[vm.type_name], catalog.startup_seconds)
            for vm in self.vms
        ]


class AssignmentError(ValueError):
    pass


def pick_vm(current_execs: Sequence[Fraction], performances: Sequence[Fraction]) -> int:
    """Index of the VM whose exec time after one more task is smallest."""
    best = None
    best_exec = None
    for i, (ex, p) in enumerate(zip(current_execs, performances)):
        after = ex + p
        if best is None or after < best_exec:
            best, best_exec = i, after
    return best


def _layout(alloc: Mapping[str, int], catalog: Catalog) -> list[str]:
    check_allocation(alloc, catalog)
    return [name for name in catalog.names for _ in range(alloc.get(name, 0))]


def assign(n_tasks: int, alloc: Mapping[str, int], catalog: Catalog) -> ExecutionPlan:
    if n_tasks < 0:
        raise ValueError("n_tasks must be non-negative")
    names = _layout(alloc, catalog)
    if n_tasks >= 1 and not names:
        raise AssignmentError("cannot assign tasks to an empty allocation")
    st = catalog.startup_seconds
    perf = [catalog[n].seconds_per_task for n in names]
    loads = [0] * len(names)
    # key: exec time after taking the next task; empty VMs pay startup first
    heap = [(st + p, i) for i, p in enumerate(perf)]
    heapq.heapify(heap)
    sequence = []
    for _ in range(n_tasks):
        after, i = heapq.heappop(heap)
        loads[i] += 1
        sequence.append(i)
        heapq.heappush(heap, (after + perf[i], i))
    return ExecutionPlan(tuple(VM(n, k) for n, k in zip(names, loads)), tuple(sequence))


def assign_naive(n_tasks: int, alloc: Mapping[str, int], catalog: Catalog) -> ExecutionPlan:
    """O(N*V) scan, kept as the reference behaviour for :func:`assign`."""
    names = _layout(alloc, catalog)
    if n_tasks >= 1 and not names:
        raise AssignmentError("cannot assign tasks to an empty allocation")
    st = catalog.startup_seconds
    perf = [catalog[n].seconds_per_task for n in names]
    execs = [st] * len(names)
    loads = [0] * len(names)
    sequence = []
    for _ in range(n_tasks):
        i = pick_vm(execs, perf)
        execs[i] += perf[i]
        loads[i] += 1
        sequence.append(i)
    return ExecutionPlan(tuple(VM(n, k) for n, k in zip(names, loads)), tuple(sequence))


def label_tasks(plan: ExecutionPlan) -> list[list[int]]:
    """Deal task ids 0..N-1 to VMs in assignment order."""
    labels: list[list[int]] = [[] for _ in plan.vms]
    for task_id, i in enumerate(plan.sequence):
        labels[i].append(task_id)
    return labels
