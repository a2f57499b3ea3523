#!/usr/bin/env python3
"""Run the standard experiment grid and evaluate the trend checks.

Resumable: rerunning with the same --out skips cells whose logs already
exist, so an interrupted grid picks up where it stopped.
"""
import argparse
import sys

from hrcsim.harness import ExperimentPlan, check_trends, run_batch


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/grid",
                    help="output directory (default: results/grid)")
    ap.add_argument("--seeds", type=int, default=20,
                    help="seeds per cell (default: 20)")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--with-guardian", action="store_true",
                    help="also run the guarding human model so the "
                         "guardian trend check is evaluable")
    args = ap.parse_args()

    models = ["focused_builder"] + (["guardian"] if args.with_guardian else [])
    plan = ExperimentPlan(models=models, seeds=list(range(args.seeds)))
    print(f"{len(plan.cells())} cells -> {args.out}")
    res = run_batch(plan, args.out, workers=args.workers)
    print(f"{len(res.rows)} trial results -> {res.csv_path}")
    for name, err in sorted(res.failures.items()):
        print(f"FAILED {name}: {err}", file=sys.stderr)

    report = check_trends(res.rows)
    print(report.format())
    return 0 if not res.failures and report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
