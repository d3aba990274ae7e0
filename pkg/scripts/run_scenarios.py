#!/usr/bin/env python3
"""Sweep all four built-in scenarios over the default budget and deadline grids.

Writes one CSV (default: results/scenarios.csv) and prints a short summary of
the points where the multi-type plan beat the single-type one.
"""

import argparse
import pathlib
import time

from botplan.catalog import SCENARIO_IDS, scenario_label
from botplan.harness import DEFAULT_TASKS, rows_to_csv, scenario_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--tasks", type=int, default=DEFAULT_TASKS)
    parser.add_argument("--startup", default="10")
    parser.add_argument("--out", default="results/scenarios.csv")
    args = parser.parse_args()

    start = time.perf_counter()
    rows = []
    for sid in SCENARIO_IDS:
        for kind in ("budget", "deadline"):
            rows += scenario_sweep(sid, kind, n_tasks=args.tasks, startup=args.startup)
    elapsed = time.perf_counter() - start

    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(rows_to_csv(rows))

    for sid in SCENARIO_IDS:
        for kind in ("budget", "deadline"):
            sel = [r for r in rows if r.scenario_id == sid and r.constraint_kind == kind]
            wins = [r for r in sel if r.ratio is not None and r.ratio > 1]
            best = max((float(r.ratio) for r in sel if r.ratio is not None), default=float("nan"))
            print(
                f"scenario {sid} ({scenario_label(sid)}) {kind:<8} "
                f"multi-type wins {len(wins)}/{len(sel)}  best ratio {best:.4f}"
            )
    print(f"{len(rows)} runs in {elapsed:.2f}s -> {out}")


if __name__ == "__main__":
    main()
