"""Blocks, goal structures and the mutable world state.

Task rules baked in here: the user may only place yellow blocks, the robot
may only place black ones, and a goal slot accepts exactly the color it
asks for. Everything else (who tried what, when) lives in the engine log.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import DEFAULT_SIM, SimParams
from .geometry import Position, dist

__all__ = [
    "Color", "Actor", "Assignment", "BlockState", "TaskType", "Placement",
    "Block", "GoalStructure", "TaskConfig", "UserState", "RobotState",
    "WorldState", "ScenarioError", "generate_scenario", "placement_legal",
    "task_complete", "apply_assignment", "world_to_dict",
]


class Color(str, Enum):
    YELLOW = "yellow"
    BLACK = "black"


class Actor(str, Enum):
    USER = "user"
    ROBOT = "robot"


class Assignment(str, Enum):
    UNASSIGNED = "unassigned"
    ROBOT = "robot"
    USER = "user"


class BlockState(str, Enum):
    ON_TABLE = "on_table"
    HELD = "held"
    PLACED = "placed"


class TaskType(str, Enum):
    COUPLED = "coupled"
    DECOUPLED = "decoupled"


class Placement(str, Enum):
    SCATTERED = "scattered"
    SORTED = "sorted"


class ScenarioError(Exception):
    """Scenario generation could not satisfy the layout constraints."""


@dataclass
class TaskConfig:
    task_type: TaskType = TaskType.COUPLED
    placement: Placement = Placement.SCATTERED
    seed: int = 0
    block_count: int = 16

    def __post_init__(self) -> None:
        self.task_type = TaskType(self.task_type)
        self.placement = Placement(self.placement)
        if self.block_count != 16:
            raise ValueError("the block-stacking task uses exactly 16 blocks")


@dataclass(slots=True)
class Block:
    id: int
    color: Color
    x: float
    y: float
    label: int                      # number printed on top, used by voice
    state: BlockState = BlockState.ON_TABLE
    holder: Actor | None = None
    structure: int | None = None    # set once placed
    slot: int | None = None
    assignment: Assignment = Assignment.UNASSIGNED

    @property
    def position(self) -> Position:
        return Position(self.x, self.y)

    @property
    def on_table(self) -> bool:
        return self.state is BlockState.ON_TABLE


@dataclass(slots=True)
class GoalStructure:
    id: int
    base_x: float
    base_y: float
    slots: tuple[Color, ...]
    filled: int = 0

    @property
    def next_color(self) -> Color | None:
        if self.filled >= len(self.slots):
            return None
        return self.slots[self.filled]

    @property
    def full(self) -> bool:
        return self.filled >= len(self.slots)


@dataclass(slots=True)
class UserState:
    x: float
    y: float
    held: int | None = None


@dataclass(slots=True)
class RobotState:
    base_x: float
    base_y: float
    x: float
    y: float
    held: int | None = None
    queue: list[int] = field(default_factory=list)   # FIFO of allocated block ids
    never_retry: set[int] = field(default_factory=set)
    errors: int = 0


@dataclass
class WorldState:
    """Single source of simulation truth; the engine mutates it in place."""

    config: TaskConfig
    blocks: dict[int, Block]
    structures: list[GoalStructure]
    user: UserState
    robot: RobotState
    tick: int = 0


def _coupled_slots() -> tuple[Color, ...]:
    return (Color.YELLOW, Color.BLACK, Color.YELLOW, Color.BLACK)


def generate_scenario(config: TaskConfig, sim: SimParams = DEFAULT_SIM) -> WorldState:
    """Deterministically lay out structures and blocks for one trial.

    Coupled structures alternate yellow/black from the bottom; decoupled
    trials get two all-yellow and two all-black structures. Scattered
    placement draws uniformly over the table, sorted placement keeps
    yellow in the user half (y < 0.5) and black in the robot half. Spawns
    respect the separation and goal-clearance margins; a layout that
    cannot be packed raises ScenarioError.
    """
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0]))

    structures: list[GoalStructure] = []
    for i, (bx, by) in enumerate(sim.structure_bases):
        if config.task_type is TaskType.COUPLED:
            slots = _coupled_slots()
        else:
            slots = ((Color.YELLOW,) * 4) if i < 2 else ((Color.BLACK,) * 4)
        structures.append(GoalStructure(id=i, base_x=bx, base_y=by, slots=slots))

    colors = [Color.YELLOW] * 8 + [Color.BLACK] * 8
    order = rng.permutation(len(colors))
    colors = [colors[i] for i in order]

    margin = sim.block_radius
    blocks: dict[int, Block] = {}
    placed: list[tuple[float, float]] = []
    for i, color in enumerate(colors):
        bid = i + 1
        if config.placement is Placement.SORTED:
            if color is Color.YELLOW:
                ylo, yhi = margin, 0.5 * sim.table_h - 1e-9
            else:
                ylo, yhi = 0.5 * sim.table_h + 1e-9, sim.table_h - margin
        else:
            ylo, yhi = margin, sim.table_h - margin
        for _ in range(200):
            x = float(rng.uniform(margin, sim.table_w - margin))
            y = float(rng.uniform(ylo, yhi))
            if any(dist(x, y, px, py) < sim.min_spawn_separation for px, py in placed):
                continue
            if any(dist(x, y, s.base_x, s.base_y) < sim.goal_clearance for s in structures):
                continue
            break
        else:
            raise ScenarioError(f"could not place block {bid} for seed {config.seed}")
        placed.append((x, y))
        blocks[bid] = Block(id=bid, color=color, x=x, y=y, label=bid)

    return WorldState(
        config=config,
        blocks=blocks,
        structures=structures,
        user=UserState(x=sim.user_home[0], y=sim.user_home[1]),
        robot=RobotState(base_x=sim.robot_base[0], base_y=sim.robot_base[1],
                         x=sim.robot_base[0], y=sim.robot_base[1]),
    )


def placement_legal(world: WorldState, actor: Actor, block: Block,
                    structure: GoalStructure) -> bool:
    """True when actor may drop this block onto the structure's next slot."""
    if structure.full:
        return False
    if actor is Actor.USER and block.color is not Color.YELLOW:
        return False
    if actor is Actor.ROBOT and block.color is not Color.BLACK:
        return False
    return structure.next_color is block.color


def task_complete(world: WorldState) -> bool:
    return all(s.full for s in world.structures)


def apply_assignment(world: WorldState, block_id: int, to: Assignment,
                     enqueue: bool = True) -> None:
    """Set a block's assignment and keep the robot queue consistent.

    Allocations to the robot enqueue (explicit techniques only pass
    enqueue=True); anything else removes the block from the queue.
    """
    block = world.blocks[block_id]
    block.assignment = to
    q = world.robot.queue
    if to is Assignment.ROBOT:
        if enqueue and block_id not in q:
            q.append(block_id)
    else:
        if block_id in q:
            q.remove(block_id)


def world_to_dict(world: WorldState) -> dict:
    """Plain-dict snapshot used for equality checks and wire transfer."""
    return {
        "tick": world.tick,
        "blocks": {
            str(b.id): {
                "color": b.color.value,
                "x": b.x, "y": b.y,
                "state": b.state.value,
                "holder": b.holder.value if b.holder else None,
                "structure": b.structure,
                "slot": b.slot,
                "assignment": b.assignment.value,
            }
            for b in sorted(world.blocks.values(), key=lambda b: b.id)
        },
        "structures": [
            {"id": s.id, "base": [s.base_x, s.base_y],
             "slots": [c.value for c in s.slots], "filled": s.filled}
            for s in world.structures
        ],
        "user": {"x": world.user.x, "y": world.user.y, "held": world.user.held},
        "robot": {"x": world.robot.x, "y": world.robot.y,
                  "held": world.robot.held,
                  "queue": list(world.robot.queue),
                  "never_retry": sorted(world.robot.never_retry),
                  "errors": world.robot.errors},
    }
