"""Command-line entry points: batch runs, trend checks, live serving,
and log replay."""
from __future__ import annotations

import argparse
import csv
import json
import sys

from .engine import ReplayError, replay
from .events import EventLog, MalformedLogError
from .harness import ExperimentPlan, check_trends, load_plan, run_batch
from .metrics import fluency_report

_STR_COLS = {"technique", "task_type", "placement", "model"}
_INT_COLS = {"seed", "ticks", "robot_errors", "touch_allocation",
             "touch_manipulate", "touch_maneuver"}


def _load_rows(path: str) -> list[dict]:
    if path.endswith(".json"):
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = []
        for raw in csv.DictReader(fh):
            row = {}
            for k, v in raw.items():
                if k in _STR_COLS:
                    row[k] = v
                elif k == "completed":
                    row[k] = v == "True"
                elif k in _INT_COLS:
                    row[k] = int(v)
                else:
                    row[k] = float(v)
            rows.append(row)
        return rows


def _cmd_run(args) -> int:
    plan = load_plan(args.plan) if args.plan else ExperimentPlan()
    res = run_batch(plan, args.out, workers=args.workers,
                    progress=(None if args.quiet else _progress))
    print(f"{len(res.rows)} trial results -> {res.csv_path}")
    if res.failures:
        for name, err in sorted(res.failures.items()):
            print(f"FAILED {name}: {err}", file=sys.stderr)
        return 2
    return 0


def _progress(path: str, err: str | None) -> None:
    mark = "ok" if err is None else f"FAILED: {err}"
    print(f"  {path.rsplit('/', 1)[-1]}: {mark}")


def _cmd_trends(args) -> int:
    report = check_trends(_load_rows(args.results))
    print(report.format())
    return 0 if report.passed and report.evaluated else 1


def _cmd_serve(args) -> int:
    from .server import serve
    defaults = {"technique": args.technique, "task_type": args.task,
                "placement": args.placement, "seed": args.seed}
    serve(host=args.host, port=args.port, defaults=defaults,
          log_dir=args.log_dir)
    return 0


def _cmd_replay(args) -> int:
    try:
        log = EventLog.read(args.log)
        world = replay(log)
    except (MalformedLogError, ReplayError) as exc:
        print(f"replay failed: {exc}", file=sys.stderr)
        return 1
    h = log.header
    print(f"technique={h['technique']} task={h['config']['task_type']} "
          f"placement={h['config']['placement']} seed={h['config']['seed']}")
    print(f"replay ok: {len(log.entries)} entries, final tick {world.tick}")
    if world.tick > 0:
        r = fluency_report(log)
        print(f"completed={r.completed} time={r.completion_time_s:.1f}s "
              f"user_idle={r.user_idle_pct:.1f}% "
              f"robot_idle={r.robot_idle_pct:.1f}% "
              f"concurrent={r.concurrent_activity_pct:.1f}% "
              f"errors={r.robot_errors}")
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="hrcsim",
        description="Tabletop human-robot collaboration simulator with "
                    "pluggable task-allocation techniques.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a batch experiment plan")
    p.add_argument("--plan", help="JSON plan file (defaults to the full "
                                  "grid, 20 seeds)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=_cmd_run)

    p = sub.add_parser("trends", help="evaluate directional trend checks "
                                      "on a results table")
    p.add_argument("--results", required=True, help="results.csv or .json")
    p.set_defaults(fn=_cmd_trends)

    p = sub.add_parser("serve", help="serve live WebSocket sessions")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8712)
    p.add_argument("--technique", default="fixed")
    p.add_argument("--task", default="coupled",
                   choices=["coupled", "decoupled"])
    p.add_argument("--placement", default="scattered",
                   choices=["scattered", "sorted"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log-dir", default=None)
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("replay", help="rebuild final state from a log and "
                                      "print its fluency report")
    p.add_argument("--log", required=True)
    p.set_defaults(fn=_cmd_replay)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
