"""Acceptance gate: one test per guaranteed behavior of the package.

Each test pins a contract the package must keep: selector equivalence with
brute-force search, byte-level determinism, score-field laws, task-rule
safety, and the directional outcomes the scripted models reproduce over
the standard experiment grid. Trend comparisons are computed here from raw
result rows, independently of the harness's own trend checker.
"""
from __future__ import annotations

import time
from dataclasses import asdict
from pathlib import Path
from statistics import fmean

import numpy as np
import pytest

from helpers import (ALL_TECHNIQUE_NAMES, NaiveGazeWindow, NaiveProximity,
                     make_world, oracle_distance, oracle_gaze,
                     oracle_proactive, oracle_proximity, random_world)
from hrcsim import HumanModel, PolicyParams, SimParams
from hrcsim.engine import replay, run_trial, world_equal
from hrcsim.events import EventLog
from hrcsim.geometry import RegionGrid
from hrcsim.harness import IMPLICIT_TECHNIQUES, ExperimentPlan, run_batch
from hrcsim.metrics import fluency_report, segment_timeline
from hrcsim.policies import (distance_select, gaze_select, proactive_select,
                             proximity_select)
from hrcsim.scorefield import ScoreField
from hrcsim.workspace import Actor

SIM = SimParams()
PARAMS = PolicyParams()

_IMPLICIT_ERR = ("distance", "gaze", "proximity")
_EXPLICIT = ("voice", "menu", "fixed")


def _mean(rows, key, **match):
    vals = [r[key] for r in rows
            if all(r[k] == v for k, v in match.items())]
    assert vals, f"no rows matching {match}"
    return fmean(vals)


@pytest.fixture(scope="session")
def main_batch(tmp_path_factory):
    """Full grid: 8 techniques x 2 tasks x 2 placements x 20 seeds."""
    out = tmp_path_factory.mktemp("acceptance_batch")
    t0 = time.perf_counter()
    res = run_batch(ExperimentPlan(), out)
    elapsed = time.perf_counter() - t0
    assert res.failures == {}, f"batch cells failed: {res.failures}"
    assert len(res.rows) == 640
    return res, elapsed


@pytest.fixture(scope="session")
def guardian_batch(tmp_path_factory):
    """The four implicit techniques rerun with the guarding human model."""
    out = tmp_path_factory.mktemp("acceptance_guardian")
    res = run_batch(ExperimentPlan(techniques=list(IMPLICIT_TECHNIQUES),
                                   models=["guardian"]), out)
    assert res.failures == {}, f"batch cells failed: {res.failures}"
    assert len(res.rows) == 320
    return res


def test_c01_implicit_selectors_match_brute_force_search():
    """All four implicit selectors agree with naive full scans on 10,000
    random worlds (up to 16 blocks, 10x10 grid) in under 30 seconds."""
    t0 = time.perf_counter()
    grid = RegionGrid(SIM.grid_rows, SIM.grid_cols, SIM.table_w, SIM.table_h)
    gaze_f = ScoreField(grid, PARAMS, SIM.tick_s, track_gaze=True,
                        track_proximity=False)
    gaze_naive = NaiveGazeWindow(grid.n_regions, gaze_f.window_ticks)
    prox_f = ScoreField(grid, PARAMS, SIM.tick_s, track_gaze=False,
                        track_proximity=True)
    prox_naive = NaiveProximity(SIM, PARAMS)

    rng = np.random.default_rng(20260823)
    checked = 0
    for _ in range(10_000):
        w = random_world(rng, SIM)
        # both fields keep evolving under a random event stream
        for _ in range(3):
            region = None if rng.random() < 0.25 else int(rng.integers(0, 100))
            gaze_f.observe_gaze(region)
            gaze_naive.observe(region)
        pickups = []
        if rng.random() < 0.5:
            actor = Actor.USER if rng.random() < 0.5 else Actor.ROBOT
            pickups.append((actor, float(rng.uniform(0, 1)),
                            float(rng.uniform(0, 1))))
        prox_f.tick_update(pickups, None)
        prox_naive.tick(pickups)

        assert proactive_select(w) == oracle_proactive(w)
        assert distance_select(w) == oracle_distance(w)
        assert gaze_select(w, gaze_f, PARAMS) == \
            oracle_gaze(w, gaze_naive.means(), SIM, PARAMS)
        assert proximity_select(w, prox_f, PARAMS) == \
            oracle_proximity(w, prox_naive.user, prox_naive.robot, SIM,
                             PARAMS)
        checked += 1
    elapsed = time.perf_counter() - t0
    assert checked == 10_000
    assert elapsed < 30.0, f"selector sweep took {elapsed:.1f}s"
    print(f"C1 PASS: {checked} worlds x 4 selectors in {elapsed:.1f}s")


def test_c02_trials_are_deterministic_and_replayable():
    """100 seeded trials per technique: a rerun is byte-identical, replaying
    the log alone rebuilds the exact final world, and the fluency report
    survives serialization. Budget: 60 seconds."""
    t0 = time.perf_counter()
    combos = [("coupled", "scattered"), ("coupled", "sorted"),
              ("decoupled", "scattered"), ("decoupled", "sorted")]
    n = 0
    for tech in ALL_TECHNIQUE_NAMES:
        for seed in range(100):
            task, pl = combos[seed % 4]
            w1 = make_world(task, pl, seed)
            r1, log1 = run_trial(w1, HumanModel(), tech)
            text = log1.dumps()
            _, log2 = run_trial(make_world(task, pl, seed), HumanModel(),
                                tech)
            assert log2.dumps() == text, \
                f"{tech} seed {seed}: rerun differs"
            parsed = EventLog.parse(text)
            assert world_equal(replay(parsed), w1), \
                f"{tech} seed {seed}: replay diverged from the live world"
            assert asdict(fluency_report(parsed)) == asdict(r1.report), \
                f"{tech} seed {seed}: report changed across serialization"
            n += 1
    elapsed = time.perf_counter() - t0
    assert n == 800
    assert elapsed < 60.0, f"determinism sweep took {elapsed:.1f}s"
    print(f"C2 PASS: {n} trials run twice, replayed, reported in "
          f"{elapsed:.1f}s")


def test_c03_score_field_laws():
    """Scores stay within [0, amplitude], decay strictly and hit half value
    after one half-life within one tick, and windowed gaze means equal a
    naive history buffer."""
    grid = RegionGrid(SIM.grid_rows, SIM.grid_cols, SIM.table_w, SIM.table_h)

    # half-life: an untouched score halves after exactly half_life seconds
    f = ScoreField(grid, PARAMS, SIM.tick_s, track_gaze=False,
                   track_proximity=True)
    f.tick_update([(Actor.USER, 0.5, 0.5)], None)
    own = grid.index_at(0.5, 0.5)
    assert f.user_score[own] == PARAMS.infusion_amplitude
    half_ticks = round(PARAMS.decay_half_life_s / SIM.tick_s)
    values = []
    for _ in range(half_ticks + 1):
        f.tick_update([], None)
        values.append(float(f.user_score[own]))
    target = PARAMS.infusion_amplitude / 2
    assert values[half_ticks - 2] > target > values[half_ticks]
    assert values[half_ticks - 1] == pytest.approx(target, abs=1e-9)

    # boundedness and strict decay under a random infusion stream
    rng = np.random.default_rng(7)
    f = ScoreField(grid, PARAMS, SIM.tick_s, track_gaze=False,
                   track_proximity=True)
    for _ in range(120):
        pickups = []
        if rng.random() < 0.5:
            actor = Actor.USER if rng.random() < 0.5 else Actor.ROBOT
            pickups.append((actor, float(rng.uniform(0, 1)),
                            float(rng.uniform(0, 1))))
        f.tick_update(pickups, None)
        for arr in (f.user_score, f.robot_score):
            assert float(arr.min()) >= 0.0
            assert float(arr.max()) <= PARAMS.infusion_amplitude
    hot = [i for i in range(grid.n_regions) if f.user_score[i] > 0]
    assert hot, "stream never heated a region"
    for _ in range(5):
        before = f.user_score[hot].copy()
        f.tick_update([], None)
        assert (f.user_score[hot] < before).all()

    # ring buffer vs explicit history, equal after every observation
    f = ScoreField(grid, PARAMS, SIM.tick_s, track_gaze=True,
                   track_proximity=False)
    naive = NaiveGazeWindow(grid.n_regions, f.window_ticks)
    for _ in range(300):
        region = None if rng.random() < 0.2 else int(rng.integers(0, 100))
        f.observe_gaze(region)
        naive.observe(region)
        assert [float(v) for v in f.gaze_means()] == naive.means()
    print("C3 PASS: bounded, strict decay, half-life within one tick, "
          "window means exact")


def test_c04_task_rules_hold_over_the_whole_grid(main_batch):
    """Across every grid log: the robot never places yellow, error counts
    equal failed yellow grasps, a failed yellow block is never re-attempted,
    finished interleaved stacks alternate colors, and per-actor segments
    tile each trial to within one tick."""
    res, _ = main_batch
    logs = sorted(Path(res.out_dir).joinpath("logs").iterdir(),
                  key=lambda p: p.name)
    assert len(logs) == 640
    rows = {(r["technique"], r["task_type"], r["placement"], r["seed"]): r
            for r in res.rows}
    for path in logs:
        log = EventLog.read(path)
        h = log.header
        colors = {int(k): v["color"] for k, v in h["scenario"]["blocks"].items()}
        robot_places = [e for e in log.entries if e["t"] == "act"
                        and e["actor"] == "robot" and e["kind"] == "place"]
        for e in robot_places:
            assert colors[e["block"]] == "black", \
                f"{path.name}: robot placed a yellow block"
        robot_picks = [e for e in log.entries if e["t"] == "act"
                       and e["actor"] == "robot" and e["kind"] == "pick"]
        fails = [e["target"] for e in robot_picks
                 if e.get("outcome") == "fail_yellow"]
        for bid in fails:
            attempts = [e for e in robot_picks if e["target"] == bid]
            assert len(attempts) == 1, \
                f"{path.name}: block {bid} re-attempted after a yellow grasp"
        row = rows[(h["technique"], h["config"]["task_type"],
                    h["config"]["placement"], h["config"]["seed"])]
        assert row["robot_errors"] == len(fails)

        world = replay(log)
        assert world.robot.errors == len(fails)
        if h["config"]["task_type"] == "coupled":
            for s in world.structures:
                placed = sorted((b for b in world.blocks.values()
                                 if b.structure == s.id),
                                key=lambda b: b.slot)
                for b in placed:
                    assert b.color.value == s.slots[b.slot].value, \
                        f"{path.name}: stack {s.id} broke alternation"

        seg = segment_timeline(log)
        assert seg.user.total_s == pytest.approx(seg.duration_s,
                                                 abs=SIM.tick_s)
        assert seg.robot.total_s == pytest.approx(seg.duration_s,
                                                  abs=SIM.tick_s)
    print(f"C4 PASS: task rules hold over {len(logs)} logs")


def test_c05_concurrency_never_exceeds_either_actor(main_batch,
                                                    guardian_batch):
    """Concurrent-activity share is bounded by each actor's active share in
    every report."""
    res, _ = main_batch
    rows = res.rows + guardian_batch.rows
    for r in rows:
        bound = min(100.0 - r["user_idle_pct"], 100.0 - r["robot_idle_pct"])
        assert r["concurrent_activity_pct"] <= bound + 1e-6, \
            (f"{r['technique']}/{r['task_type']}/{r['placement']}"
             f"/{r['seed']}: {r['concurrent_activity_pct']} > {bound}")
    print(f"C5 PASS: bound holds in {len(rows)} reports")


def test_c06_menu_interaction_is_slowest(main_batch):
    """Seed-mean completion under the press-hold menu exceeds voice and all
    four implicit techniques; the whole grid ran within its two-minute
    budget."""
    res, elapsed = main_batch
    assert elapsed < 120.0, f"grid batch took {elapsed:.1f}s"
    menu = _mean(res.rows, "completion_time_s", technique="menu")
    others = {}
    for other in ("voice", "proactive", "distance", "gaze", "proximity"):
        others[other] = _mean(res.rows, "completion_time_s", technique=other)
        assert menu > others[other], \
            f"menu {menu:.2f}s not above {other} {others[other]:.2f}s"
    detail = ", ".join(f"{k} {v:.2f}s" for k, v in others.items())
    print(f"C6 PASS: menu {menu:.2f}s vs {detail} (batch {elapsed:.1f}s)")


def test_c07_task_and_placement_shape_completion(main_batch):
    """Pooled means: interleaved-stack tasks take longer than independent
    ones, and scattered spawns take longer than color-sorted ones."""
    res, _ = main_batch
    coupled = _mean(res.rows, "completion_time_s", task_type="coupled")
    decoupled = _mean(res.rows, "completion_time_s", task_type="decoupled")
    assert coupled > decoupled, f"{coupled:.2f}s vs {decoupled:.2f}s"
    scattered = _mean(res.rows, "completion_time_s", placement="scattered")
    srt = _mean(res.rows, "completion_time_s", placement="sorted")
    assert scattered > srt, f"{scattered:.2f}s vs {srt:.2f}s"
    print(f"C7 PASS: coupled {coupled:.2f}s > decoupled {decoupled:.2f}s; "
          f"scattered {scattered:.2f}s > sorted {srt:.2f}s")


def test_c08_implicit_techniques_err_more(main_batch):
    """Each inference-driven technique averages more wrong-color grasps than
    every explicit one, and coupling raises implicit errors."""
    res, _ = main_batch
    imp_means = {t: _mean(res.rows, "robot_errors", technique=t)
                 for t in _IMPLICIT_ERR}
    exp_means = {t: _mean(res.rows, "robot_errors", technique=t)
                 for t in _EXPLICIT}
    for ti, vi in imp_means.items():
        for te, ve in exp_means.items():
            assert vi > ve, f"{ti} {vi:.2f} not above {te} {ve:.2f}"
    imp_rows = [r for r in res.rows if r["technique"] in _IMPLICIT_ERR]
    coupled = _mean(imp_rows, "robot_errors", task_type="coupled")
    decoupled = _mean(imp_rows, "robot_errors", task_type="decoupled")
    assert coupled > decoupled, f"{coupled:.2f} vs {decoupled:.2f}"
    imp = ", ".join(f"{k} {v:.2f}" for k, v in imp_means.items())
    exp = ", ".join(f"{k} {v:.2f}" for k, v in exp_means.items())
    print(f"C8 PASS: errors {imp} all above {exp}; "
          f"coupled {coupled:.2f} > decoupled {decoupled:.2f}")


def test_c09_guarding_reduces_implicit_errors(main_batch, guardian_batch):
    """On matched seeds, the guarding human strictly lowers pooled robot
    errors across the inference-driven techniques."""
    res, _ = main_batch
    focused = [r for r in res.rows if r["technique"] in IMPLICIT_TECHNIQUES]
    guarded = guardian_batch.rows
    cells = lambda rows: sorted((r["technique"], r["task_type"],
                                 r["placement"], r["seed"]) for r in rows)
    assert cells(focused) == cells(guarded)      # same 320 cells, same seeds
    f_total = sum(r["robot_errors"] for r in focused)
    g_total = sum(r["robot_errors"] for r in guarded)
    assert g_total < f_total, \
        f"guardian {g_total} errors not below focused {f_total}"
    print(f"C9 PASS: pooled errors focused {f_total} vs guardian {g_total} "
          f"over {len(focused)} matched cells")


def test_c10_menu_overhead_share(main_batch):
    """Allocation plus maneuvering consumes a large share of trial time
    under the menu technique: above the 15% floor, aiming for 20%."""
    res, _ = main_batch
    menu_rows = [r for r in res.rows if r["technique"] == "menu"]
    share = fmean((r["user_allocation_s"] + r["user_maneuver_s"])
                  / r["completion_time_s"] for r in menu_rows)
    assert share > 0.15, f"observed share {share:.1%}"
    print(f"C10 PASS: menu overhead share {share:.1%} "
          f"(floor 15%, target 20%)")
