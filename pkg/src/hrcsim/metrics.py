"""Team-fluency metrics computed from trial logs.

Pure post-processing: everything here reads an immutable EventLog and
derives per-actor time segments, idle and concurrency percentages, error
and touch counts. A manipulation chain is classified by how it ends: at a
goal slot it is goal time, released elsewhere it is maneuvering, and any
chain ending in an allocation (menu hold, spoken label, detected push, or
a release that changed an assignment) counts as allocation overhead. For
the robot, chains ending in a failed or aborted grasp are overhead
reaching.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .events import EventLog, MalformedLogError

__all__ = ["ActorSegments", "TimeSegments", "FluencyReport", "TrialResult",
           "segment_timeline", "fluency_report", "trial_result",
           "result_row", "export_results", "RESULT_COLUMNS"]

_EXPLICIT_CAUSES = {"voice", "menu", "subtle", "fixed"}


@dataclass
class ActorSegments:
    idle_s: float = 0.0
    goal_manipulation_s: float = 0.0
    maneuver_s: float = 0.0           # user only
    allocation_s: float = 0.0         # user only
    reach_overhead_s: float = 0.0     # robot only

    @property
    def total_s(self) -> float:
        return (self.idle_s + self.goal_manipulation_s + self.maneuver_s
                + self.allocation_s + self.reach_overhead_s)


@dataclass
class TimeSegments:
    user: ActorSegments
    robot: ActorSegments
    duration_s: float


@dataclass
class FluencyReport:
    completion_time_s: float
    completed: bool
    user_idle_pct: float
    robot_idle_pct: float
    concurrent_activity_pct: float
    robot_errors: int
    touch_allocation: int
    touch_manipulate: int
    touch_maneuver: int


@dataclass
class TrialResult:
    technique: str
    task_type: str
    placement: str
    model: str
    seed: int
    completed: bool
    ticks: int
    segments: TimeSegments
    report: FluencyReport


def _end_entry(log: EventLog) -> dict:
    for e in reversed(log.entries):
        if e["t"] == "end":
            return e
    raise ValueError("log has no end entry")


def segment_timeline(log: EventLog) -> TimeSegments:
    """Split each actor's recorded spans into labeled time buckets.

    Per actor the spans tile the trial exactly, so the buckets sum to the
    trial duration.
    """
    tick_s = log.header["sim"]["tick_s"]
    end_tick = _end_entry(log)["tick"]
    if end_tick <= 0:
        raise ValueError("zero-duration trial has no timeline to segment")

    # releases that changed an assignment, keyed by (release tick, block)
    release_allocs = {(e["tick"], e["block"]) for e in log.entries
                      if e["t"] == "alloc" and e["cause"] in _EXPLICIT_CAUSES}

    user = ActorSegments()
    robot = ActorSegments()
    touches = {"allocation": 0, "manipulate": 0, "maneuver": 0}
    buf_ticks = {"user": 0, "robot": 0}
    buf_touch = {"user": False, "robot": False}
    last_end = {"user": 0, "robot": 0}

    def flush(actor: str, bucket: str, seg: ActorSegments,
              touch_class: str | None) -> None:
        t = buf_ticks[actor]
        if t:
            setattr(seg, bucket, getattr(seg, bucket) + t * tick_s)
        if actor == "user" and touch_class is not None and buf_touch[actor]:
            touches[touch_class] += 1
        buf_ticks[actor] = 0
        buf_touch[actor] = False

    for e in log.entries:
        t = e["t"]
        if t == "abort":
            actor = e["actor"]
            seg = user if actor == "user" else robot
            bucket = "maneuver_s" if actor == "user" else "reach_overhead_s"
            flush(actor, bucket, seg, "maneuver")
            continue
        if t != "act":
            continue
        actor = e["actor"]
        seg = user if actor == "user" else robot
        if e["start"] < last_end[actor]:
            raise MalformedLogError(
                f"overlapping {actor} records at tick {e['start']}")
        last_end[actor] = e["end"]
        dur = e["end"] - e["start"]
        kind = e["kind"]
        if kind == "idle":
            seg.idle_s += dur * tick_s
            continue
        buf_ticks[actor] += dur
        if kind == "reach":
            continue
        if kind == "pick":
            if e.get("outcome") == "ok":
                if actor == "user":
                    buf_touch[actor] = True
                    continue            # user chain continues to its release
                flush(actor, "goal_manipulation_s", seg, None)
            else:
                flush(actor, "maneuver_s" if actor == "user"
                      else "reach_overhead_s", seg, "maneuver")
            continue
        if kind == "place":
            flush(actor, "goal_manipulation_s", seg, "manipulate")
            continue
        if kind == "maneuver":
            cls = ("allocation" if (e["end"] - 1, e["target"]) in release_allocs
                   else "maneuver")
            flush(actor, "allocation_s" if cls == "allocation" else "maneuver_s",
                  seg, cls)
            continue
        if kind == "menu_dwell":
            buf_touch[actor] = True
            flush(actor, "allocation_s", seg, "allocation")
            continue
        if kind == "allocate_gesture":
            flush(actor, "allocation_s", seg, None)
            continue
    # unfinished buffers would mean the engine dropped a record mid-chain
    for actor, seg, bucket in (("user", user, "maneuver_s"),
                               ("robot", robot, "reach_overhead_s")):
        flush(actor, bucket, seg, None)

    segments = TimeSegments(user=user, robot=robot,
                            duration_s=end_tick * tick_s)
    segments._touches = touches  # type: ignore[attr-defined]
    return segments


def fluency_report(log: EventLog,
                   segments: TimeSegments | None = None) -> FluencyReport:
    tick_s = log.header["sim"]["tick_s"]
    end = _end_entry(log)
    end_tick = end["tick"]
    if end_tick <= 0:
        raise ValueError("zero-duration trial has no fluency to report")
    segments = segments or segment_timeline(log)

    active = {"user": np.zeros(end_tick, dtype=bool),
              "robot": np.zeros(end_tick, dtype=bool)}
    errors = 0
    for e in log.entries:
        if e["t"] != "act":
            continue
        if e["kind"] == "pick" and e.get("outcome") == "fail_yellow":
            errors += 1
        if e["kind"] == "idle":
            continue
        arr = active[e["actor"]]
        arr[e["start"]:e["end"]] = True
    user_active = int(active["user"].sum())
    robot_active = int(active["robot"].sum())
    both = int((active["user"] & active["robot"]).sum())

    touches = getattr(segments, "_touches", {"allocation": 0, "manipulate": 0,
                                             "maneuver": 0})
    return FluencyReport(
        completion_time_s=end_tick * tick_s,
        completed=bool(end["completed"]),
        user_idle_pct=100.0 * (end_tick - user_active) / end_tick,
        robot_idle_pct=100.0 * (end_tick - robot_active) / end_tick,
        concurrent_activity_pct=100.0 * both / end_tick,
        robot_errors=errors,
        touch_allocation=touches["allocation"],
        touch_manipulate=touches["manipulate"],
        touch_maneuver=touches["maneuver"],
    )


def trial_result(log: EventLog) -> TrialResult:
    h = log.header
    segments = segment_timeline(log)
    report = fluency_report(log, segments)
    return TrialResult(
        technique=h["technique"],
        task_type=h["config"]["task_type"],
        placement=h["config"]["placement"],
        model=h["model"].get("kind", "remote"),
        seed=h["config"]["seed"],
        completed=report.completed,
        ticks=_end_entry(log)["tick"],
        segments=segments,
        report=report,
    )


RESULT_COLUMNS = [
    "technique", "task_type", "placement", "model", "seed", "completed",
    "ticks", "completion_time_s", "user_idle_pct", "robot_idle_pct",
    "concurrent_activity_pct", "robot_errors", "user_goal_manipulation_s",
    "user_maneuver_s", "user_allocation_s", "user_idle_s", "robot_goal_manipulation_s",
    "robot_reach_overhead_s", "robot_idle_s", "touch_allocation",
    "touch_manipulate", "touch_maneuver",
]


def result_row(tr: TrialResult) -> dict:
    r = tr.report
    s = tr.segments
    row = {
        "technique": tr.technique,
        "task_type": tr.task_type,
        "placement": tr.placement,
        "model": tr.model,
        "seed": tr.seed,
        "completed": tr.completed,
        "ticks": tr.ticks,
        "completion_time_s": r.completion_time_s,
        "user_idle_pct": r.user_idle_pct,
        "robot_idle_pct": r.robot_idle_pct,
        "concurrent_activity_pct": r.concurrent_activity_pct,
        "robot_errors": r.robot_errors,
        "user_goal_manipulation_s": s.user.goal_manipulation_s,
        "user_maneuver_s": s.user.maneuver_s,
        "user_allocation_s": s.user.allocation_s,
        "user_idle_s": s.user.idle_s,
        "robot_goal_manipulation_s": s.robot.goal_manipulation_s,
        "robot_reach_overhead_s": s.robot.reach_overhead_s,
        "robot_idle_s": s.robot.idle_s,
        "touch_allocation": r.touch_allocation,
        "touch_manipulate": r.touch_manipulate,
        "touch_maneuver": r.touch_maneuver,
    }
    for k, v in row.items():
        if isinstance(v, float):
            row[k] = round(v, 6)
    return row


def export_results(rows: list[dict], fmt: str = "csv") -> str:
    """Serialize result rows with a fixed column order."""
    if not rows:
        raise ValueError("no results to export")
    if fmt == "csv":
        out = io.StringIO()
        w = csv.DictWriter(out, fieldnames=RESULT_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: row.get(k) for k in RESULT_COLUMNS})
        return out.getvalue()
    if fmt == "json":
        ordered = [{k: row.get(k) for k in RESULT_COLUMNS} for row in rows]
        return json.dumps(ordered, indent=2) + "\n"
    raise ValueError(f"unknown export format {fmt!r}")
