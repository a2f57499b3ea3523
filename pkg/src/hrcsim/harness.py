"""Batch experiment harness.

Runs the technique x task x placement x human-model grid over a list of
seeds, persists one JSON-lines log per trial, exports a metrics table, and
evaluates a fixed list of directional trend checks over the seed-averaged
means. Reruns are resumable: a cell whose log file already exists is not
simulated again, and the results table is always rebuilt from the logs on
disk so a resumed batch matches a fresh one byte for byte.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import fmean

from .config import DEFAULT_POLICY, PolicyParams
from .engine import run_trial
from .events import EventLog
from .humans import HumanModel, ModelKind
from .metrics import export_results, result_row, trial_result
from .policies import Technique
from .workspace import Placement, TaskConfig, TaskType, generate_scenario

__all__ = ["ExperimentPlan", "BatchResult", "TrendCheck", "TrendReport",
           "load_plan", "run_batch", "check_trends"]

ALL_TECHNIQUES = [t.value for t in Technique]


@dataclass
class ExperimentPlan:
    techniques: list[str] = field(default_factory=lambda: list(ALL_TECHNIQUES))
    task_types: list[str] = field(default_factory=lambda: ["coupled",
                                                           "decoupled"])
    placements: list[str] = field(default_factory=lambda: ["scattered",
                                                           "sorted"])
    models: list[str] = field(default_factory=lambda: ["focused_builder"])
    seeds: list[int] = field(default_factory=lambda: list(range(20)))
    tick_limit: int = 12000
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for t in self.techniques:
            Technique(t)
        for t in self.task_types:
            TaskType(t)
        for p in self.placements:
            Placement(p)
        for m in self.models:
            ModelKind(m)
        if not (self.techniques and self.task_types and self.placements
                and self.models and self.seeds):
            raise ValueError("experiment plan must cover a non-empty grid")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be distinct")
        if self.tick_limit <= 0:
            raise ValueError("tick_limit must be positive")
        # params must name real policy knobs
        PolicyParams(**self.params)

    def cells(self) -> list[tuple[str, str, str, str, int]]:
        return [(tech, task, pl, m, s)
                for tech in self.techniques
                for task in self.task_types
                for pl in self.placements
                for m in self.models
                for s in self.seeds]

    def to_dict(self) -> dict:
        return {"techniques": list(self.techniques),
                "task_types": list(self.task_types),
                "placements": list(self.placements),
                "models": list(self.models),
                "seeds": list(self.seeds),
                "tick_limit": self.tick_limit,
                "params": dict(self.params)}


def load_plan(path: str | os.PathLike) -> ExperimentPlan:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    known = {f for f in ExperimentPlan.__dataclass_fields__}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown plan fields: {sorted(unknown)}")
    return ExperimentPlan(**raw)


def _log_name(cell: tuple[str, str, str, str, int]) -> str:
    tech, task, pl, model, seed = cell
    return f"{tech}_{task}_{pl}_{model}_{seed}.jsonl"


def _run_cell(job: tuple) -> tuple[str, str | None]:
    """Simulate one cell and persist its log; returns (path, error)."""
    cell, tick_limit, params_dict, path = job
    tech, task, pl, model_kind, seed = cell
    try:
        params = PolicyParams(**params_dict) if params_dict else DEFAULT_POLICY
        cfg = TaskConfig(task_type=task, placement=pl, seed=seed)
        world = generate_scenario(cfg)
        model = HumanModel(kind=model_kind)
        _, log = run_trial(world, model, tech, params=params,
                           tick_limit=tick_limit)
        tmp = path + ".tmp"
        log.write(tmp)
        os.replace(tmp, path)
        return path, None
    except Exception as exc:  # noqa: BLE001 - cell failure must not kill batch
        return path, f"{type(exc).__name__}: {exc}"


@dataclass
class BatchResult:
    rows: list[dict]
    failures: dict[str, str]
    out_dir: str

    @property
    def csv_path(self) -> str:
        return os.path.join(self.out_dir, "results.csv")

    @property
    def json_path(self) -> str:
        return os.path.join(self.out_dir, "results.json")


def run_batch(plan: ExperimentPlan, out_dir: str | os.PathLike,
              workers: int = 1, progress=None) -> BatchResult:
    """Run every cell x seed of the plan, skipping cells already on disk."""
    out_dir = os.fspath(out_dir)
    log_dir = os.path.join(out_dir, "logs")
    os.makedirs(log_dir, exist_ok=True)

    cells = plan.cells()
    jobs = []
    for cell in cells:
        path = os.path.join(log_dir, _log_name(cell))
        if not os.path.exists(path):
            jobs.append((cell, plan.tick_limit, plan.params, path))

    failures: dict[str, str] = {}
    if jobs:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(_run_cell, jobs, chunksize=4))
        else:
            outcomes = [_run_cell(j) for j in jobs]
        for path, err in outcomes:
            if err is not None:
                failures[os.path.basename(path)] = err
            if progress is not None:
                progress(path, err)

    # the table is always rebuilt from disk, in plan order, so resumed and
    # fresh batches serialize identically
    rows = []
    for cell in cells:
        path = os.path.join(log_dir, _log_name(cell))
        if os.path.exists(path):
            rows.append(result_row(trial_result(EventLog.read(path))))

    result = BatchResult(rows=rows, failures=failures, out_dir=out_dir)
    if rows:
        with open(result.csv_path, "w", encoding="utf-8") as fh:
            fh.write(export_results(rows, "csv"))
        with open(result.json_path, "w", encoding="utf-8") as fh:
            fh.write(export_results(rows, "json"))
    if failures:
        with open(os.path.join(out_dir, "failures.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(failures, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return result


# ---------- trend checks ----------

@dataclass
class TrendCheck:
    name: str
    passed: bool | None            # None = not evaluable from these rows
    detail: str

    @property
    def status(self) -> str:
        if self.passed is None:
            return "SKIP"
        return "PASS" if self.passed else "FAIL"


@dataclass
class TrendReport:
    checks: list[TrendCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.passed is not None)

    @property
    def evaluated(self) -> int:
        return sum(1 for c in self.checks if c.passed is not None)

    def format(self) -> str:
        lines = [f"{c.status:4s} {c.name}: {c.detail}" for c in self.checks]
        tally = (f"{sum(1 for c in self.checks if c.passed)} passed, "
                 f"{sum(1 for c in self.checks if c.passed is False)} failed, "
                 f"{len(self.checks) - self.evaluated} not evaluable")
        return "\n".join(lines + [tally])


_IMPLICIT_ERR = ("distance", "gaze", "proximity")
_EXPLICIT_ERR = ("voice", "menu", "fixed")
IMPLICIT_TECHNIQUES = ("proactive", "distance", "gaze", "proximity")


def _mean(rows: list[dict], key: str, **match) -> float | None:
    vals = [r[key] for r in rows
            if all(r.get(k) == v for k, v in match.items())]
    return fmean(vals) if vals else None


def _gt(name: str, lhs: float | None, rhs: float | None, lhs_lbl: str,
        rhs_lbl: str, unit: str = "s") -> TrendCheck:
    if lhs is None or rhs is None:
        missing = lhs_lbl if lhs is None else rhs_lbl
        return TrendCheck(name, None, f"missing cells for {missing}")
    return TrendCheck(name, lhs > rhs,
                      f"{lhs_lbl} {lhs:.2f}{unit} vs {rhs_lbl} {rhs:.2f}{unit}")


def check_trends(rows: list[dict]) -> TrendReport:
    """Directional findings the scripted models are expected to reproduce.

    Completion-time and error comparisons use the focused_builder rows; the
    guarding comparison contrasts the guardian model against focused_builder
    on the implicit techniques.
    """
    fb = [r for r in rows if r.get("model") == "focused_builder"]
    checks: list[TrendCheck] = []

    menu = _mean(fb, "completion_time_s", technique="menu")
    for other in ("voice", "proactive", "distance", "gaze", "proximity"):
        checks.append(_gt(f"completion_menu_gt_{other}", menu,
                          _mean(fb, "completion_time_s", technique=other),
                          "menu", other))

    checks.append(_gt("completion_coupled_gt_decoupled",
                      _mean(fb, "completion_time_s", task_type="coupled"),
                      _mean(fb, "completion_time_s", task_type="decoupled"),
                      "coupled", "decoupled"))
    checks.append(_gt("completion_scattered_gt_sorted",
                      _mean(fb, "completion_time_s", placement="scattered"),
                      _mean(fb, "completion_time_s", placement="sorted"),
                      "scattered", "sorted"))

    explicit_errs = [_mean(fb, "robot_errors", technique=t)
                     for t in _EXPLICIT_ERR]
    worst_explicit = (None if any(e is None for e in explicit_errs)
                      else max(explicit_errs))
    for t in _IMPLICIT_ERR:
        checks.append(_gt(f"errors_{t}_gt_explicit",
                          _mean(fb, "robot_errors", technique=t),
                          worst_explicit, t, "max(voice,menu,fixed)",
                          unit=""))

    imp = [r for r in fb if r.get("technique") in _IMPLICIT_ERR]
    checks.append(_gt("errors_implicit_coupled_gt_decoupled",
                      _mean(imp, "robot_errors", task_type="coupled"),
                      _mean(imp, "robot_errors", task_type="decoupled"),
                      "coupled", "decoupled", unit=""))

    guard = [r for r in rows if r.get("model") == "guardian"
             and r.get("technique") in IMPLICIT_TECHNIQUES]
    fb_imp = [r for r in fb if r.get("technique") in IMPLICIT_TECHNIQUES]
    checks.append(_gt("errors_guardian_lt_focused",
                      _mean(fb_imp, "robot_errors"),
                      _mean(guard, "robot_errors"),
                      "focused_builder", "guardian", unit=""))

    menu_rows = [r for r in fb if r.get("technique") == "menu"]
    if menu_rows:
        share = fmean((r["user_allocation_s"] + r["user_maneuver_s"])
                      / r["completion_time_s"] for r in menu_rows)
        checks.append(TrendCheck("menu_overhead_share_gt_15pct", share > 0.15,
                                 f"observed {100 * share:.1f}% of trial time"))
    else:
        checks.append(TrendCheck("menu_overhead_share_gt_15pct", None,
                                 "missing cells for menu"))
    return TrendReport(checks)
