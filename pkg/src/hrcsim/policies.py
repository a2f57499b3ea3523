"""The eight task-allocation techniques.

Explicit techniques turn a user input into an allocation: speaking a block
label, holding a block until a menu fires, pushing a block toward one
party, or releasing it inside a static territory band. Implicit techniques
never see user input directly; when the robot is free they pick its next
target from world state and the score fields.

All selectors share one eligibility rule: the block is on the table, not
assigned to the user, and not on the robot's never-retry list. The robot
does not know block colors up front, so an unattempted yellow block is
eligible until the first failed grasp teaches the robot otherwise. Ties
break toward the lowest block id everywhere.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

from .config import PolicyParams, SimParams
from .geometry import RegionGrid, dist
from .scorefield import ScoreField
from .workspace import (Actor, Assignment, Block, Color, WorldState)

__all__ = [
    "Technique", "TechniqueTraits", "TECHNIQUE_TRAITS", "MenuChoice",
    "GestureResult", "AllocationEvent", "eligible_blocks", "voice_allocate",
    "menu_interact", "detect_relocation_gesture", "fixed_territory_owner",
    "fixed_territory_on_release", "proactive_select", "distance_select",
    "gaze_select", "proximity_select", "Policy", "make_policy",
]

log = logging.getLogger(__name__)


class Technique(str, Enum):
    VOICE = "voice"
    MENU = "menu"
    SUBTLE = "subtle"
    FIXED = "fixed"
    PROACTIVE = "proactive"
    DISTANCE = "distance"
    GAZE = "gaze"
    PROXIMITY = "proximity"


@dataclass(frozen=True)
class TechniqueTraits:
    explicit: bool
    perspective: str                # "object" | "robot" | "workspace"
    workspace_kind: str | None      # "static" | "dynamic" for workspace techniques


TECHNIQUE_TRAITS: dict[Technique, TechniqueTraits] = {
    Technique.VOICE:     TechniqueTraits(True,  "object",    None),
    Technique.MENU:      TechniqueTraits(True,  "object",    None),
    Technique.SUBTLE:    TechniqueTraits(True,  "robot",     None),
    Technique.FIXED:     TechniqueTraits(True,  "workspace", "static"),
    Technique.PROACTIVE: TechniqueTraits(False, "robot",     None),
    Technique.DISTANCE:  TechniqueTraits(False, "robot",     None),
    Technique.GAZE:      TechniqueTraits(False, "workspace", "dynamic"),
    Technique.PROXIMITY: TechniqueTraits(False, "workspace", "dynamic"),
}


class MenuChoice(str, Enum):
    TO_ROBOT = "to_robot"
    TO_SELF = "to_self"
    CANCEL = "cancel"


class GestureResult(str, Enum):
    TO_ROBOT = "to_robot"
    TO_USER = "to_user"
    NONE = "none"


@dataclass(frozen=True)
class AllocationEvent:
    block: int
    to: Assignment
    cause: str          # technique name, or "fail_yellow" for grasp errors
    tick: int


def eligible_blocks(world: WorldState) -> list[Block]:
    """Blocks the robot may currently consider, in id order."""
    nr = world.robot.never_retry
    return [b for b in sorted(world.blocks.values(), key=lambda b: b.id)
            if b.on_table and b.assignment is not Assignment.USER
            and b.id not in nr]


# ---------- explicit techniques ----------

def voice_allocate(world: WorldState, label: int) -> AllocationEvent | None:
    """Spoken label -> allocate that block to the robot.

    Unknown or off-table labels are a no-op with a warning; a label on the
    never-retry list still produces the event (the robot will skip it).
    """
    for b in world.blocks.values():
        if b.label == label and b.on_table:
            return AllocationEvent(b.id, Assignment.ROBOT, Technique.VOICE.value,
                                   world.tick)
    log.warning("voice allocation ignored: no on-table block labeled %s", label)
    return None


def menu_interact(world: WorldState, block_id: int, dwell_ticks: int,
                  choice: MenuChoice, params: PolicyParams,
                  tick_s: float) -> AllocationEvent | None:
    """Press-and-hold menu on a block; fires only if the hold reached the
    dwell threshold. to_robot allocates, to_self reserves for the user,
    cancel clears the current allocation."""
    needed = round(params.menu_dwell_s / tick_s)
    if dwell_ticks < needed:
        return None
    to = {MenuChoice.TO_ROBOT: Assignment.ROBOT,
          MenuChoice.TO_SELF: Assignment.USER,
          MenuChoice.CANCEL: Assignment.UNASSIGNED}[MenuChoice(choice)]
    return AllocationEvent(block_id, to, Technique.MENU.value, world.tick)


def detect_relocation_gesture(
    trajectory: list[tuple[float, float, float]],
    params: PolicyParams,
    user_anchor: tuple[float, float],
    robot_anchor: tuple[float, float],
) -> GestureResult:
    """Classify a (t_s, x, y) block trajectory as a push toward the robot,
    a pull toward the user, or neither.

    The net displacement must reach the minimum distance and point within
    the detection cone around the direction from the start point to the
    respective anchor. Callers pass at most one gesture window of history.
    """
    if len(trajectory) < 2:
        return GestureResult.NONE
    _, x0, y0 = trajectory[0]
    _, x1, y1 = trajectory[-1]
    dx, dy = x1 - x0, y1 - y0
    d = math.hypot(dx, dy)
    if d < params.gesture_min_displacement:
        return GestureResult.NONE
    cone = math.radians(params.gesture_cone_half_angle_deg)

    def within_cone(ax: float, ay: float) -> bool:
        tx, ty = ax - x0, ay - y0
        t = math.hypot(tx, ty)
        if t == 0.0:
            return False
        cosang = (dx * tx + dy * ty) / (d * t)
        return math.acos(max(-1.0, min(1.0, cosang))) <= cone

    if within_cone(*robot_anchor):
        return GestureResult.TO_ROBOT
    if within_cone(*user_anchor):
        return GestureResult.TO_USER
    return GestureResult.NONE


def fixed_territory_owner(y: float, params: PolicyParams) -> str:
    """Which static band a y coordinate falls into: user / group / robot."""
    if y < params.band_user_max:
        return "user"
    if y > params.band_robot_min:
        return "robot"
    return "group"


def fixed_territory_on_release(world: WorldState, block_id: int,
                               params: PolicyParams) -> AllocationEvent | None:
    """Releasing a block inside a band allocates it to that band's owner;
    the group band clears any allocation. No event if nothing changes."""
    b = world.blocks[block_id]
    owner = fixed_territory_owner(b.y, params)
    to = {"user": Assignment.USER, "robot": Assignment.ROBOT,
          "group": Assignment.UNASSIGNED}[owner]
    if b.assignment is to:
        return None
    return AllocationEvent(block_id, to, Technique.FIXED.value, world.tick)


# ---------- implicit selectors ----------

def _argmin_block(cands: list[tuple[float, Block]]) -> int | None:
    if not cands:
        return None
    best_score, best = cands[0]
    for score, b in cands[1:]:
        if score < best_score:
            best_score, best = score, b
    return best.id


def proactive_select(world: WorldState) -> int | None:
    """Pick the eligible block closest to where the gripper currently is,
    i.e. near the robot's most recent activity."""
    r = world.robot
    return _argmin_block([(dist(b.x, b.y, r.x, r.y), b)
                          for b in eligible_blocks(world)])


def distance_select(world: WorldState) -> int | None:
    """Pick the eligible block closest to the robot's mounting base."""
    r = world.robot
    return _argmin_block([(dist(b.x, b.y, r.base_x, r.base_y), b)
                          for b in eligible_blocks(world)])


def gaze_select(world: WorldState, field: ScoreField,
                params: PolicyParams) -> int | None:
    """Pick the eligible block whose surrounding regions the user has
    looked at least, averaging the windowed gaze means near each block."""
    means = field.gaze_means()
    cands = []
    for b in eligible_blocks(world):
        idx = field.grid.near(b.x, b.y, params.infusion_radius)
        cands.append((float(means[idx].mean()), b))
    return _argmin_block(cands)


def proximity_select(world: WorldState, field: ScoreField,
                     params: PolicyParams) -> int | None:
    """Prefer blocks inside the robot's own recent work area; otherwise
    take the block least claimed by the user, skipping anything whose
    user score exceeds the avoidance threshold."""
    survivors: list[tuple[float, float, Block]] = []
    for b in eligible_blocks(world):
        idx = field.grid.near(b.x, b.y, params.infusion_radius)
        u = float(field.user_score[idx].mean())
        r = float(field.robot_score[idx].mean())
        if u > params.user_avoid_threshold:
            continue
        survivors.append((u, r, b))
    if not survivors:
        return None
    robot_side = [(-r, b) for u, r, b in survivors if r > 0.0]
    if robot_side:
        return _argmin_block(robot_side)      # max robot score
    return _argmin_block([(u, b) for u, r, b in survivors])


# ---------- strategy facade used by the engine ----------

class Policy:
    """Bundles one technique's hooks behind a uniform interface."""

    def __init__(self, technique: Technique, params: PolicyParams,
                 sim: SimParams, grid: RegionGrid):
        self.technique = Technique(technique)
        self.traits = TECHNIQUE_TRAITS[self.technique]
        self.params = params
        self.sim = sim
        self.grid = grid

    @property
    def explicit(self) -> bool:
        return self.traits.explicit

    @property
    def uses_gaze(self) -> bool:
        return self.technique is Technique.GAZE

    @property
    def uses_proximity(self) -> bool:
        return self.technique is Technique.PROXIMITY

    def make_field(self, tick_s: float) -> ScoreField | None:
        if not (self.uses_gaze or self.uses_proximity):
            return None
        return ScoreField(self.grid, self.params, tick_s,
                          track_gaze=self.uses_gaze,
                          track_proximity=self.uses_proximity)

    def select(self, world: WorldState, field: ScoreField | None) -> int | None:
        """Implicit target choice; explicit techniques never select."""
        t = self.technique
        if t is Technique.PROACTIVE:
            return proactive_select(world)
        if t is Technique.DISTANCE:
            return distance_select(world)
        if t is Technique.GAZE:
            return gaze_select(world, field, self.params)
        if t is Technique.PROXIMITY:
            return proximity_select(world, field, self.params)
        return None

    def on_release(self, world: WorldState, block_id: int,
                   trajectory: list[tuple[float, float, float]] | None,
                   ) -> AllocationEvent | None:
        """Hook run when the user releases a block on the table."""
        t = self.technique
        if t is Technique.FIXED:
            return fixed_territory_on_release(world, block_id, self.params)
        if t is Technique.SUBTLE and trajectory:
            res = detect_relocation_gesture(trajectory, self.params,
                                            self.sim.user_anchor,
                                            self.sim.robot_base)
            if res is GestureResult.TO_ROBOT:
                return AllocationEvent(block_id, Assignment.ROBOT,
                                       Technique.SUBTLE.value, world.tick)
            if res is GestureResult.TO_USER:
                return AllocationEvent(block_id, Assignment.USER,
                                       Technique.SUBTLE.value, world.tick)
        return None


def make_policy(technique: Technique | str, params: PolicyParams,
                sim: SimParams, grid: RegionGrid | None = None) -> Policy:
    grid = grid or RegionGrid(sim.grid_rows, sim.grid_cols,
                              sim.table_w, sim.table_h)
    return Policy(Technique(technique), params, sim, grid)
