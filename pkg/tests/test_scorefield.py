"""Score-field dynamics: window means, decay, infusion, classification."""
from __future__ import annotations

import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from helpers import NaiveGazeWindow, NaiveProximity, regions_within
from hrcsim import PolicyParams, SimParams
from hrcsim.geometry import RegionGrid
from hrcsim.scorefield import (GROUP, ROBOT, USER, ScoreField, classify_gaze,
                               classify_proximity)
from hrcsim.workspace import Actor


def _field(params=None, sim=None, **kw):
    sim = sim or SimParams()
    params = params or PolicyParams()
    grid = RegionGrid(sim.grid_rows, sim.grid_cols, sim.table_w, sim.table_h)
    return ScoreField(grid, params, sim.tick_s, **kw), sim, params


regions = st.one_of(st.none(), st.integers(0, 99))
points = st.tuples(st.integers(0, 100).map(lambda v: v / 100),
                   st.integers(0, 100).map(lambda v: v / 100))


def test_window_size_from_params():
    f, sim, params = _field()
    assert f.window_ticks == round(params.gaze_window_s / sim.tick_s) == 100


@given(st.lists(regions, max_size=350))
def test_gaze_ring_buffer_equals_naive_window_mean(seq):
    f, _, _ = _field(track_proximity=False)
    naive = NaiveGazeWindow(f.grid.n_regions, f.window_ticks)
    for r in seq:
        f.observe_gaze(r)
        naive.observe(r)
        assert np.allclose(f.gaze_means(), naive.means(), rtol=0, atol=0)


@given(st.lists(st.tuples(st.sampled_from([Actor.USER, Actor.ROBOT]),
                          points),
                max_size=40))
def test_proximity_bounded_by_amplitude(events):
    f, _, params = _field(track_gaze=False)
    for actor, (x, y) in events:
        f.tick_update([(actor, x, y)], None)
        for arr in (f.user_score, f.robot_score):
            assert float(arr.min()) >= 0.0
            assert float(arr.max()) <= params.infusion_amplitude


def test_decay_strictly_monotone_until_zero():
    f, _, _ = _field(track_gaze=False)
    f.infuse(Actor.USER, 0.3, 0.3)
    prev = f.user_score.copy()
    for _ in range(50):
        f.decay()
        hot = prev > 0
        assert (f.user_score[hot] < prev[hot]).all()
        assert (f.user_score >= 0).all()
        prev = f.user_score.copy()


def test_half_life_reaches_half_within_one_tick():
    f, sim, params = _field(track_gaze=False)
    f.infuse(Actor.ROBOT, 0.5, 0.5)
    region = f.grid.index_at(0.5, 0.5)
    assert f.robot_score[region] == params.infusion_amplitude == 1.0
    half_ticks = round(params.decay_half_life_s / sim.tick_s)
    for _ in range(half_ticks - 1):
        f.decay()
    before = float(f.robot_score[region])
    f.decay()
    at = float(f.robot_score[region])
    f.decay()
    after = float(f.robot_score[region])
    # 0.5 is bracketed by the values one tick either side of the half-life
    assert after <= 0.5 <= before
    assert math.isclose(at, 0.5, rel_tol=0, abs_tol=1e-9)


@given(points, st.sampled_from([Actor.USER, Actor.ROBOT]))
def test_infusion_footprint_and_opponent_clearing(pt, actor):
    f, sim, params = _field(track_gaze=False)
    other = Actor.ROBOT if actor is Actor.USER else Actor.USER
    f.infuse(other, 0.5, 0.5)                 # prior claim everywhere it lands
    f.infuse(actor, *pt)
    own = f.user_score if actor is Actor.USER else f.robot_score
    opp = f.robot_score if actor is Actor.USER else f.user_score
    footprint = set(regions_within(sim, pt[0], pt[1], params.infusion_radius))
    for idx in range(f.grid.n_regions):
        if idx in footprint:
            assert own[idx] == params.infusion_amplitude
            assert opp[idx] == 0.0


@given(st.lists(st.tuples(st.sampled_from([Actor.USER, Actor.ROBOT]), points),
                max_size=30))
def test_proximity_stream_matches_naive(events):
    f, sim, params = _field(track_gaze=False)
    naive = NaiveProximity(sim, params)
    for actor, (x, y) in events:
        f.tick_update([(actor, x, y)], None)
        naive.tick([(actor, x, y)])
        assert np.array_equal(f.user_score, np.array(naive.user))
        assert np.array_equal(f.robot_score, np.array(naive.robot))


@given(st.lists(st.floats(0, 1, allow_nan=False), min_size=100, max_size=100))
def test_classify_gaze_against_thresholds(vals):
    params = PolicyParams()
    means = np.array(vals)
    out = classify_gaze(means, params)
    for v, c in zip(vals, out):
        if v > params.classify_theta_user:
            assert c == USER
        elif v < params.classify_theta_robot:
            assert c == ROBOT
        else:
            assert c == GROUP


@given(st.lists(st.tuples(st.floats(0, 1, allow_nan=False),
                          st.floats(0, 1, allow_nan=False)),
                min_size=100, max_size=100))
def test_classify_proximity_dominance(pairs):
    params = PolicyParams()
    u = np.array([p[0] for p in pairs])
    r = np.array([p[1] for p in pairs])
    out = classify_proximity(u, r, params)
    for uu, rr, c in zip(u, r, out):
        user_hot = uu > params.classify_theta_user
        robot_hot = rr > params.classify_theta_robot
        if user_hot and uu >= rr:
            assert c == USER
        elif robot_hot and rr > uu:
            assert c == ROBOT
        else:
            assert c == GROUP


def test_tick_update_order_decay_then_infuse_then_gaze():
    f, _, params = _field()
    f.infuse(Actor.USER, 0.2, 0.2)
    region = f.grid.index_at(0.2, 0.2)
    f.tick_update([(Actor.USER, 0.2, 0.2)], region)
    # infusion happened after decay, so the amplitude is exact again
    assert f.user_score[region] == params.infusion_amplitude
    assert f.gaze_means()[region] == 1.0 / f.window_ticks
