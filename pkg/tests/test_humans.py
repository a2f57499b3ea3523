"""Scripted human models: build discipline, allocation styles, guarding."""
from __future__ import annotations

import math

import pytest

from helpers import build_world
from hrcsim import HumanModel, PolicyParams, SimParams
from hrcsim.humans import GazeMode, ModelKind, gaze_point, human_policy_step
from hrcsim.policies import MenuChoice, make_policy
from hrcsim.workspace import Assignment, BlockState

SIM = SimParams()
PARAMS = PolicyParams()


def _step(model, world, technique="voice", robot_idle=False, field=None):
    policy = make_policy(technique, PARAMS, SIM)
    return human_policy_step(model, world, policy, field, SIM, PARAMS,
                             robot_idle=robot_idle)


def test_model_kind_coercion():
    m = HumanModel(kind="guardian", gaze_mode="sweep")
    assert m.kind is ModelKind.GUARDIAN
    assert m.gaze_mode is GazeMode.SWEEP
    with pytest.raises(ValueError):
        HumanModel(kind="daydreamer")


def test_focused_builds_nearest_yellow_into_current_structure():
    w = build_world([(1, "yellow", 0.5, 0.1), (2, "yellow", 0.5, 0.9),
                     (3, "black", 0.6, 0.1)])
    act = _step(HumanModel(), w)
    assert act.kind == "build"
    assert act.block == 1                     # nearest yellow to her hand
    assert act.structure == 0                 # lowest structure needing yellow


def test_focused_stays_with_structure_waiting_on_robot():
    # structure 0 has its first yellow down; next slot is the robot's
    w = build_world([(1, "yellow", 0.5, 0.1), (2, "black", 0.6, 0.1)])
    w.structures[0].filled = 1
    act = _step(HumanModel(), w, robot_idle=False)
    assert act.kind == "idle"                 # she does not open structure 1
    # an idle robot turns the wait into allocation work instead
    act = _step(HumanModel(), w, robot_idle=True)
    assert act.kind == "voice" and act.label == 2


def test_focused_moves_on_once_her_slots_are_done():
    w = build_world([(1, "yellow", 0.5, 0.1)])
    w.structures[0].filled = 3                # only the top black remains
    act = _step(HumanModel(), w)
    assert act.kind == "build" and act.structure == 1


def test_focused_allocates_only_when_robot_is_idle():
    w = build_world([(1, "yellow", 0.5, 0.1), (2, "black", 0.6, 0.1)])
    act = _step(HumanModel(), w, robot_idle=False)
    assert act.kind == "build"
    act = _step(HumanModel(), w, robot_idle=True)
    assert act.kind == "voice"


def test_focused_never_allocates_under_implicit_techniques():
    w = build_world([(1, "yellow", 0.5, 0.1), (2, "black", 0.6, 0.1)])
    act = _step(HumanModel(), w, technique="distance", robot_idle=True)
    assert act.kind == "build"


def test_eager_allocates_everything_before_building():
    m = HumanModel(kind="eager_manager")
    w = build_world([(1, "yellow", 0.5, 0.1), (2, "black", 0.6, 0.1),
                     (3, "black", 0.7, 0.1)])
    act = _step(m, w, robot_idle=False)
    assert act.kind == "voice" and act.label == 2   # lowest label first
    w.blocks[2].assignment = Assignment.ROBOT
    act = _step(m, w)
    assert act.kind == "voice" and act.label == 3
    w.blocks[3].assignment = Assignment.ROBOT
    act = _step(m, w)
    assert act.kind == "build"                # nothing left to hand over


def test_menu_allocation_targets_nearest_black():
    m = HumanModel()
    w = build_world([(1, "yellow", 0.5, 0.5), (2, "black", 0.5, 0.2),
                     (3, "black", 0.5, 0.9)])
    w.structures[0].filled = 1                # park her on the robot's turn
    act = _step(m, w, technique="menu", robot_idle=True)
    assert act.kind == "menu"
    assert act.block == 2 and act.choice is MenuChoice.TO_ROBOT


def test_subtle_push_stays_on_table_or_falls_back_to_pull():
    m = HumanModel()
    w = build_world([(1, "yellow", 0.5, 0.5), (2, "black", 0.5, 0.5)])
    w.structures[0].filled = 1
    act = _step(m, w, technique="subtle", robot_idle=True)
    assert act.kind == "push" and act.block == 2
    ex, ey = act.dest
    assert SIM.block_radius <= ex <= SIM.table_w - SIM.block_radius
    assert SIM.block_radius <= ey <= SIM.table_h - SIM.block_radius
    assert ey > 0.5                           # the shove heads robot-ward
    # a block hugging the far edge cannot be shoved further: pull it back
    w2 = build_world([(1, "yellow", 0.5, 0.5), (2, "black", 0.5, 0.99)])
    w2.structures[0].filled = 1
    act = _step(m, w2, technique="subtle", robot_idle=True)
    assert act.kind == "move" and act.block == 2
    assert act.dest[1] < 0.99                 # back toward the user


def test_fixed_allocation_moves_block_into_robot_band():
    m = HumanModel()
    w = build_world([(1, "yellow", 0.5, 0.5), (2, "black", 0.5, 0.2)])
    w.structures[0].filled = 1
    act = _step(m, w, technique="fixed", robot_idle=True)
    assert act.kind == "move" and act.block == 2
    assert act.dest[1] > PARAMS.band_robot_min


def test_guardian_parks_the_selectors_next_yellow_target():
    m = HumanModel(kind="guardian")
    # the yellow sits closest to the robot base, so distance would grab it
    w = build_world([(1, "yellow", 0.5, 0.9), (2, "black", 0.5, 0.2)])
    act = _step(m, w, technique="distance", robot_idle=True)
    assert act.kind == "move" and act.block == 1
    dx, dy = act.dest
    assert dy < m.guard_parked_y
    assert math.hypot(dx - m.guard_home[0], dy - m.guard_home[1]) < 0.2
    # once parked below the safe line it is left alone
    w.blocks[1].x, w.blocks[1].y = m.guard_home
    act = _step(m, w, technique="distance", robot_idle=True)
    assert act.kind != "move" or act.block != 1


def test_guardian_ignores_explicit_techniques_and_black_targets():
    m = HumanModel(kind="guardian")
    w = build_world([(1, "yellow", 0.5, 0.9), (2, "black", 0.6, 0.95)])
    act = _step(m, w, technique="voice", robot_idle=False)
    assert act.kind == "build"                # no guarding for explicit modes
    w2 = build_world([(1, "yellow", 0.5, 0.1), (2, "black", 0.6, 0.95)])
    act = _step(m, w2, technique="distance", robot_idle=False)
    assert act.kind == "build"                # selector wants a black: fine


def test_place_held_routes_to_a_needy_structure():
    m = HumanModel()
    w = build_world([(1, "yellow", 0.5, 0.5)])
    w.blocks[1].state = BlockState.HELD
    w.user.held = 1
    act = _step(m, w)
    assert act.kind == "place_held"
    assert w.structures[act.structure].next_color.value == "yellow"
    for s in w.structures:
        s.filled = 1                          # every next slot wants black
    act = _step(m, w)
    assert act.kind == "wait_holding"


def test_gaze_modes():
    follow = HumanModel()
    assert gaze_point(follow, (0.3, 0.4), 10, 0.05) == (0.3, 0.4)
    assert gaze_point(follow, None, 10, 0.05) is None
    fixed = HumanModel(gaze_mode="fixed_point", fixed_gaze_point=(0.2, 0.3))
    assert gaze_point(fixed, (0.9, 0.9), 10, 0.05) == (0.2, 0.3)
    sweep = HumanModel(gaze_mode="sweep", sweep_period_s=8.0)
    period_ticks = round(8.0 / 0.05)
    pts = [gaze_point(sweep, None, t, 0.05) for t in range(period_ticks)]
    assert all(0.0 <= x <= 1.0 and y == 0.5 for x, y in pts)
    assert gaze_point(sweep, None, 0, 0.05) == \
        pytest.approx(gaze_point(sweep, None, period_ticks, 0.05))
