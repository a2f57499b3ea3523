"""Scripted human behavior models.

Each model is a decision rule consulted whenever the simulated human is
free: it looks at the world and returns one intent (build, allocate,
relocate, or wait), which the engine compiles into timed reach / pick /
place / maneuver actions. The human moves twice as fast as the robot arm
and spends half a second on each pick or place.

Three models ship:

* focused_builder: works one structure at a time, stacking its yellow
  blocks, and only spends time on explicit allocation when the robot has
  run out of work.
* eager_manager: performs every allocation up front, then builds.
* guardian: like focused_builder, but watches what the implicit heuristic
  would grab next and drags endangered yellow blocks to a safe corner
  before they can cause a robot error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .config import PolicyParams, SimParams
from .geometry import clamp, dist
from .policies import MenuChoice, Policy, Technique
from .workspace import (Assignment, Block, Color, WorldState)

__all__ = ["ModelKind", "GazeMode", "HumanModel", "HumanAction",
           "human_policy_step", "gaze_point"]


class ModelKind(str, Enum):
    FOCUSED = "focused_builder"
    EAGER = "eager_manager"
    GUARDIAN = "guardian"


class GazeMode(str, Enum):
    FOLLOW = "follow_manipulation"
    FIXED_POINT = "fixed_point"
    SWEEP = "sweep"


@dataclass(frozen=True)
class HumanModel:
    kind: ModelKind = ModelKind.FOCUSED
    speed_multiplier: float = 2.0       # x robot reach speed
    pick_place_s: float = 0.5
    menu_select_s: float = 0.6          # choosing the option once the menu is open
    push_distance: float = 0.2
    guard_home: tuple[float, float] = (0.15, 0.10)
    guard_parked_y: float = 0.30        # blocks below this are considered safe
    gaze_mode: GazeMode = GazeMode.FOLLOW
    fixed_gaze_point: tuple[float, float] = (0.35, 0.30)
    sweep_period_s: float = 8.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ModelKind(self.kind))
        object.__setattr__(self, "gaze_mode", GazeMode(self.gaze_mode))


@dataclass(frozen=True)
class HumanAction:
    """One intent: kind plus whichever ids/points it needs."""

    kind: str                       # idle | wait_holding | build | place_held |
                                    # voice | menu | push | move
    block: int | None = None
    structure: int | None = None
    dest: tuple[float, float] | None = None
    label: int | None = None
    choice: MenuChoice | None = None


def _nearest(blocks: list[Block], x: float, y: float) -> Block | None:
    best, best_key = None, None
    for b in blocks:
        key = (dist(b.x, b.y, x, y), b.id)
        if best_key is None or key < best_key:
            best, best_key = b, key
    return best


def _needed_structure(world: WorldState, color: Color, near_x: float,
                      near_y: float):
    best, best_key = None, None
    for s in world.structures:
        if s.next_color is not color:
            continue
        key = (dist(near_x, near_y, s.base_x, s.base_y), s.id)
        if best_key is None or key < best_key:
            best, best_key = s, key
    return best


def _alloc_candidates(world: WorldState) -> list[Block]:
    """Black blocks still needing a handoff to the robot."""
    return [b for b in world.blocks.values()
            if b.color is Color.BLACK and b.on_table
            and b.assignment is not Assignment.ROBOT]


def _push_dest(b: Block, model: HumanModel, sim: SimParams,
               params: PolicyParams) -> tuple[float, float] | None:
    """Endpoint for a push toward the robot that stays on the table and
    inside the detection cone. Tries the straight shove first, then small
    off-axis angles; None when the block sits too close to the far edge."""
    ax, ay = sim.robot_base
    base = math.atan2(ay - b.y, ax - b.x)
    margin = sim.block_radius
    for off_deg in (0.0, 20.0, -20.0, 40.0, -40.0):
        ang = base + math.radians(off_deg)
        ex = b.x + model.push_distance * math.cos(ang)
        ey = b.y + model.push_distance * math.sin(ang)
        if margin <= ex <= sim.table_w - margin and margin <= ey <= sim.table_h - margin:
            return (ex, ey)
    return None


def _pull_dest(b: Block, model: HumanModel, sim: SimParams) -> tuple[float, float]:
    ax, ay = sim.user_anchor
    base = math.atan2(ay - b.y, ax - b.x)
    d = model.push_distance + 0.05
    ex = clamp(b.x + d * math.cos(base), sim.block_radius, sim.table_w - sim.block_radius)
    ey = clamp(b.y + d * math.sin(base), sim.block_radius, sim.table_h - sim.block_radius)
    return (ex, ey)


def _allocate_action(model: HumanModel, world: WorldState, technique: Technique,
                     sim: SimParams, params: PolicyParams) -> HumanAction | None:
    cands = _alloc_candidates(world)
    if not cands:
        return None
    if technique is Technique.VOICE:
        b = min(cands, key=lambda b: b.label)
        return HumanAction("voice", label=b.label)
    b = _nearest(cands, world.user.x, world.user.y)
    if technique is Technique.MENU:
        return HumanAction("menu", block=b.id, choice=MenuChoice.TO_ROBOT)
    if technique is Technique.SUBTLE:
        dest = _push_dest(b, model, sim, params)
        if dest is None:
            # no room to shove it robot-ward: drag it to mid-table first
            return HumanAction("move", block=b.id, dest=_pull_dest(b, model, sim))
        return HumanAction("push", block=b.id, dest=dest)
    if technique is Technique.FIXED:
        ex = clamp(b.x, sim.block_radius, sim.table_w - sim.block_radius)
        ey = (params.band_robot_min + sim.table_h) / 2.0
        return HumanAction("move", block=b.id, dest=(ex, ey))
    return None


def _guard_action(model: HumanModel, world: WorldState, policy: Policy,
                  field) -> HumanAction | None:
    """Relocate the yellow block the implicit heuristic is about to grab."""
    if policy.explicit:
        return None
    sel = policy.select(world, field)
    if sel is None:
        return None
    b = world.blocks[sel]
    if b.color is not Color.YELLOW or not b.on_table:
        return None
    if b.y < model.guard_parked_y:
        return None                      # already tucked away; let it be
    hx, hy = model.guard_home
    parked = sum(1 for o in world.blocks.values()
                 if o.on_table and o.y < model.guard_parked_y
                 and dist(o.x, o.y, hx, hy) < 0.45)
    dest = (hx + 0.07 * (parked % 5), hy + 0.07 * (parked // 5))
    return HumanAction("move", block=b.id, dest=dest)


def _build_action(world: WorldState) -> HumanAction | None:
    """Yellow work on the current structure.

    The builder commits to one structure at a time (lowest id whose
    remaining slots still call for yellow) and stays with it while its
    next slot waits on the robot instead of opening the next one.
    """
    for s in world.structures:
        if Color.YELLOW not in s.slots[s.filled:]:
            continue
        if s.next_color is not Color.YELLOW:
            return None                  # robot's turn on her structure
        yellows = [b for b in world.blocks.values()
                   if b.color is Color.YELLOW and b.on_table]
        b = _nearest(yellows, world.user.x, world.user.y)
        if b is None:
            return None
        return HumanAction("build", block=b.id, structure=s.id)
    return None


def human_policy_step(model: HumanModel, world: WorldState, policy: Policy,
                      field, sim: SimParams, params: PolicyParams,
                      robot_idle: bool) -> HumanAction:
    """Next intent for a free human. See the module docstring for the
    per-model priorities."""
    user = world.user
    if user.held is not None:
        held = world.blocks[user.held]
        s = _needed_structure(world, held.color, held.x, held.y)
        if s is None:
            return HumanAction("wait_holding")
        return HumanAction("place_held", structure=s.id)

    if model.kind is ModelKind.EAGER and policy.explicit:
        act = _allocate_action(model, world, policy.technique, sim, params)
        if act is not None:
            return act
    if model.kind is ModelKind.FOCUSED and policy.explicit and robot_idle:
        act = _allocate_action(model, world, policy.technique, sim, params)
        if act is not None:
            return act
    if model.kind is ModelKind.GUARDIAN:
        act = _guard_action(model, world, policy, field)
        if act is not None:
            return act
        if policy.explicit and robot_idle:
            act = _allocate_action(model, world, policy.technique, sim, params)
            if act is not None:
                return act

    act = _build_action(world)
    if act is not None:
        return act
    return HumanAction("idle")


def gaze_point(model: HumanModel, focus: tuple[float, float] | None,
               tick: int, tick_s: float) -> tuple[float, float] | None:
    """Where the human is looking this tick.

    follow_manipulation tracks the current action's focus point (None when
    idle), fixed_point stares at one spot, sweep pans across the table.
    """
    if model.gaze_mode is GazeMode.FIXED_POINT:
        return model.fixed_gaze_point
    if model.gaze_mode is GazeMode.SWEEP:
        phase = 2.0 * math.pi * (tick * tick_s) / model.sweep_period_s
        return (0.5 + 0.4 * math.sin(phase), 0.5)
    return focus
