"""Robot arm decision rules and grasp outcomes.

The robot works one objective at a time: it drains its allocation queue in
FIFO order under explicit techniques, or asks the active selector for a
target when free under implicit ones. Grasps on yellow blocks always fail
(the robot does not know colors up front and learns by failing), black
grasps succeed with the configured probability, and failed yellows are
never attempted again.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .config import MotionModel
from .geometry import dist
from .workspace import (Actor, Assignment, Block, BlockState, Color,
                        GoalStructure, WorldState)

__all__ = ["motion_ticks", "motion_duration", "PickOutcome", "attempt_pick",
           "Decision", "robot_decide", "choose_structure"]

_EPS = 1e-9


def motion_ticks(distance: float, speed: float, tick_s: float) -> int:
    """Whole ticks to cover a straight-line distance; zero stays zero."""
    if distance <= 0.0:
        return 0
    return max(0, math.ceil(distance / speed / tick_s - _EPS))


def motion_duration(from_xy: tuple[float, float], to_xy: tuple[float, float],
                    model: MotionModel, tick_s: float) -> int:
    d = dist(from_xy[0], from_xy[1], to_xy[0], to_xy[1])
    return motion_ticks(d, model.reach_speed, tick_s)


@dataclass(frozen=True)
class PickOutcome:
    result: str                 # "success" | "fail_yellow" | "fail_random"


def attempt_pick(world: WorldState, block: Block, draw: float,
                 model: MotionModel) -> PickOutcome:
    """Resolve a robot grasp on a block within reach.

    Yellow: the grasp fails, counts as an error and the block goes on the
    never-retry list. Black: succeeds when the RNG draw clears the success
    rate; a random failure may be retried immediately.
    """
    robot = world.robot
    if block.color is Color.YELLOW:
        robot.errors += 1
        robot.never_retry.add(block.id)
        return PickOutcome("fail_yellow")
    if draw < model.black_pick_success:
        block.state = BlockState.HELD
        block.holder = Actor.ROBOT
        robot.held = block.id
        if block.id in robot.queue:
            robot.queue.remove(block.id)
        return PickOutcome("success")
    return PickOutcome("fail_random")


def choose_structure(world: WorldState, color: Color,
                     from_xy: tuple[float, float]) -> GoalStructure | None:
    """Nearest structure whose next slot wants this color; ties by id."""
    best = None
    best_key = None
    for s in world.structures:
        if s.next_color is not color:
            continue
        key = (dist(from_xy[0], from_xy[1], s.base_x, s.base_y), s.id)
        if best_key is None or key < best_key:
            best, best_key = s, key
    return best


@dataclass(frozen=True)
class Decision:
    kind: str                   # "idle" | "fetch" | "deliver"
    block: int | None = None
    structure: int | None = None
    selected: bool = False      # fetch came from an implicit selection just now


def _target_valid(world: WorldState, block_id: int) -> bool:
    b = world.blocks.get(block_id)
    return (b is not None and b.on_table
            and b.assignment is not Assignment.USER
            and b.id not in world.robot.never_retry)


def robot_decide(world: WorldState, policy, field, target: int | None) -> Decision:
    """Next objective for a free robot.

    Holding a block means deliver it (or wait if no slot is open yet).
    Otherwise retry a still-valid target, then consult the queue (explicit)
    or the selector (implicit). Queue entries that became invalid are
    dropped on the way past.
    """
    robot = world.robot
    if robot.held is not None:
        held = world.blocks[robot.held]
        s = choose_structure(world, held.color, (robot.x, robot.y))
        if s is None:
            return Decision("idle")                 # wait for a slot to open
        return Decision("deliver", block=held.id, structure=s.id)

    if target is not None and _target_valid(world, target):
        return Decision("fetch", block=target)

    while robot.queue:
        head = robot.queue[0]
        if _target_valid(world, head):
            return Decision("fetch", block=head)
        robot.queue.pop(0)

    if not policy.explicit:
        sel = policy.select(world, field)
        if sel is not None:
            return Decision("fetch", block=sel, selected=True)
    return Decision("idle")
