"""Budget- and deadline-constrained planning of Bag-of-Tasks runs on pay-per-hour cloud VMs."""

from .assigner import VM, ExecutionPlan, assign, label_tasks
from .catalog import Catalog, CatalogError, InstanceType, builtin_scenario, parse_catalog, tradeoff_ratio
from .harness import ConstraintViolation, PlanReport, SweepRow, plan_multi, plan_single, sweep
from .metrics import PlanMetrics, plan_metrics
from .optimizer import optimize
from .oracle import oracle_budget, oracle_deadline
from .seeder import Budget, Deadline, Infeasible, SeedResult, seed_budget, seed_deadline

__all__ = [
    "VM", "ExecutionPlan", "assign", "label_tasks",
    "Catalog", "CatalogError", "InstanceType", "builtin_scenario", "parse_catalog", "tradeoff_ratio",
    "ConstraintViolation", "PlanReport", "SweepRow", "plan_multi", "plan_single", "sweep",
    "PlanMetrics", "plan_metrics", "optimize", "oracle_budget", "oracle_deadline",
    "Budget", "Deadline", "Infeasible", "SeedResult", "seed_budget", "seed_deadline",
]
