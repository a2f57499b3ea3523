"""Hand-rolled reference implementations the suite checks the package against.

Everything here is deliberately naive: straight loops over blocks and grid
regions, explicit history buffers, no shared logic with the package beyond
its data types. If a selector and its oracle ever disagree, the package is
wrong (or the rule changed and both must move together).
"""
from __future__ import annotations

import math

from hrcsim import PolicyParams, SimParams, TaskConfig, generate_scenario
from hrcsim.workspace import (Actor, Assignment, Block, BlockState, Color,
                              GoalStructure, RobotState, UserState, WorldState)


def make_world(task="coupled", placement="scattered", seed=0, sim=None):
    cfg = TaskConfig(task_type=task, placement=placement, seed=seed)
    return generate_scenario(cfg, sim or SimParams())


def default_structures(sim: SimParams, task="coupled") -> list[GoalStructure]:
    out = []
    for i, (bx, by) in enumerate(sim.structure_bases):
        if task == "coupled":
            slots = (Color.YELLOW, Color.BLACK, Color.YELLOW, Color.BLACK)
        else:
            slots = ((Color.YELLOW,) * 4) if i < 2 else ((Color.BLACK,) * 4)
        out.append(GoalStructure(id=i, base_x=bx, base_y=by, slots=slots))
    return out


def build_world(blocks, robot_xy=None, never_retry=(), queue=(), sim=None,
                task="coupled", structures=None) -> WorldState:
    """World from compact block specs: (id, color, x, y[, assignment[, state]])."""
    sim = sim or SimParams()
    bs: dict[int, Block] = {}
    for spec in blocks:
        bid, color, x, y = spec[:4]
        assignment = spec[4] if len(spec) > 4 else "unassigned"
        state = spec[5] if len(spec) > 5 else "on_table"
        bs[bid] = Block(id=bid, color=Color(color), x=x, y=y, label=bid,
                        state=BlockState(state),
                        assignment=Assignment(assignment))
    rx, ry = robot_xy if robot_xy is not None else sim.robot_base
    return WorldState(
        config=TaskConfig(task_type=task, seed=0),
        blocks=bs,
        structures=(structures if structures is not None
                    else default_structures(sim, task)),
        user=UserState(x=sim.user_home[0], y=sim.user_home[1]),
        robot=RobotState(base_x=sim.robot_base[0], base_y=sim.robot_base[1],
                         x=rx, y=ry, queue=list(queue),
                         never_retry=set(never_retry)),
    )


# ---------- eligibility and selector oracles ----------

def oracle_eligible(world: WorldState) -> list[Block]:
    out = []
    for b in world.blocks.values():
        if b.state is not BlockState.ON_TABLE:
            continue
        if b.assignment is Assignment.USER:
            continue
        if b.id in world.robot.never_retry:
            continue
        out.append(b)
    return sorted(out, key=lambda b: b.id)


def _argmin_id(scored: list[tuple[float, int]]) -> int | None:
    """Lowest score wins; ties go to the lowest block id."""
    best = None
    for score, bid in scored:
        key = (score, bid)
        if best is None or key < best:
            best = key
    return None if best is None else best[1]


def oracle_proactive(world: WorldState) -> int | None:
    r = world.robot
    return _argmin_id([(math.hypot(b.x - r.x, b.y - r.y), b.id)
                       for b in oracle_eligible(world)])


def oracle_distance(world: WorldState) -> int | None:
    r = world.robot
    return _argmin_id([(math.hypot(b.x - r.base_x, b.y - r.base_y), b.id)
                       for b in oracle_eligible(world)])


def regions_within(sim: SimParams, x: float, y: float,
                   radius: float) -> list[int]:
    """Region indices whose center is within radius of the point, plus the
    containing region, enumerated tile by tile."""
    rows, cols = sim.grid_rows, sim.grid_cols
    tw, th = sim.table_w / cols, sim.table_h / rows
    hits = []
    for iy in range(rows):
        for ix in range(cols):
            cx, cy = (ix + 0.5) * tw, (iy + 0.5) * th
            dx, dy = cx - x, cy - y
            if dx * dx + dy * dy <= radius * radius:
                hits.append(iy * cols + ix)
    own_ix = min(max(int(x / tw), 0), cols - 1)
    own_iy = min(max(int(y / th), 0), rows - 1)
    own = own_iy * cols + own_ix
    if own not in hits:
        hits.append(own)
    return sorted(hits)


class NaiveGazeWindow:
    """Sliding-window exposure means kept as an explicit history list."""

    def __init__(self, n_regions: int, window_ticks: int):
        self.n = n_regions
        self.window = window_ticks
        self.history: list[int | None] = []

    def observe(self, region: int | None) -> None:
        self.history.append(region)

    def means(self) -> list[float]:
        recent = self.history[-self.window:]
        out = [0.0] * self.n
        for r in recent:
            if r is not None:
                out[r] += 1.0
        return [v / self.window for v in out]


def oracle_gaze(world: WorldState, means: list[float], sim: SimParams,
                params: PolicyParams) -> int | None:
    cands = []
    for b in oracle_eligible(world):
        idx = regions_within(sim, b.x, b.y, params.infusion_radius)
        cands.append((sum(means[i] for i in idx) / len(idx), b.id))
    return _argmin_id(cands)


class NaiveProximity:
    """User/robot channel scores maintained with explicit per-region loops."""

    def __init__(self, sim: SimParams, params: PolicyParams):
        self.sim = sim
        self.params = params
        n = sim.grid_rows * sim.grid_cols
        self.user = [0.0] * n
        self.robot = [0.0] * n
        self.decay = 0.5 ** (sim.tick_s / params.decay_half_life_s)

    def tick(self, pickups) -> None:
        self.user = [v * self.decay for v in self.user]
        self.robot = [v * self.decay for v in self.robot]
        for actor, x, y in pickups:
            idx = regions_within(self.sim, x, y, self.params.infusion_radius)
            amp = self.params.infusion_amplitude
            for i in idx:
                if actor is Actor.USER:
                    self.user[i] = amp
                    self.robot[i] = 0.0
                else:
                    self.robot[i] = amp
                    self.user[i] = 0.0


def oracle_proximity(world: WorldState, user_scores, robot_scores,
                     sim: SimParams, params: PolicyParams) -> int | None:
    survivors = []
    for b in oracle_eligible(world):
        idx = regions_within(sim, b.x, b.y, params.infusion_radius)
        u = sum(user_scores[i] for i in idx) / len(idx)
        r = sum(robot_scores[i] for i in idx) / len(idx)
        if u > params.user_avoid_threshold:
            continue
        survivors.append((u, r, b.id))
    if not survivors:
        return None
    hot = [(-r, bid) for u, r, bid in survivors if r > 0.0]
    if hot:
        return _argmin_id(hot)
    return _argmin_id([(u, bid) for u, r, bid in survivors])


def oracle_territory_owner(y: float, params: PolicyParams) -> str:
    if y < params.band_user_max:
        return "user"
    if y > params.band_robot_min:
        return "robot"
    return "group"


# ---------- random worlds for the equivalence sweeps ----------

def random_world(rng, sim: SimParams, max_blocks: int = 16) -> WorldState:
    """Arbitrary mid-trial world: mixed colors, states, assignments and a
    wandering gripper. Positions land on a 1 cm lattice."""
    n = int(rng.integers(1, max_blocks + 1))
    specs = []
    for i in range(n):
        bid = i + 1
        color = "yellow" if rng.random() < 0.5 else "black"
        x = int(rng.integers(0, 101)) / 100 * sim.table_w
        y = int(rng.integers(0, 101)) / 100 * sim.table_h
        roll = rng.random()
        state = "on_table" if roll < 0.8 else ("placed" if roll < 0.9 else "held")
        roll = rng.random()
        assignment = ("unassigned" if roll < 0.7
                      else ("user" if roll < 0.85 else "robot"))
        specs.append((bid, color, x, y, assignment, state))
    never_retry = {i + 1 for i in range(n) if rng.random() < 0.15}
    robot_xy = (float(rng.uniform(0, sim.table_w)),
                float(rng.uniform(0, sim.table_h)))
    return build_world(specs, robot_xy=robot_xy, never_retry=never_retry,
                       sim=sim)


# ---------- synthetic result rows for trend-checker tests ----------

ALL_TECHNIQUE_NAMES = ["voice", "menu", "subtle", "fixed",
                       "proactive", "distance", "gaze", "proximity"]


def trend_row(technique: str, task_type: str, placement: str,
              model: str = "focused_builder", seed: int = 0, *,
              completion: float = 45.0, errors: int = 0,
              allocation_s: float = 0.0, maneuver_s: float = 0.0) -> dict:
    return {
        "technique": technique, "task_type": task_type,
        "placement": placement, "model": model, "seed": seed,
        "completed": True, "ticks": int(completion / 0.05),
        "completion_time_s": completion, "user_idle_pct": 10.0,
        "robot_idle_pct": 20.0, "concurrent_activity_pct": 50.0,
        "robot_errors": errors, "user_goal_manipulation_s": 20.0,
        "user_maneuver_s": maneuver_s, "user_allocation_s": allocation_s,
        "user_idle_s": 5.0, "robot_goal_manipulation_s": 25.0,
        "robot_reach_overhead_s": 2.0, "robot_idle_s": 9.0,
        "touch_allocation": 0, "touch_manipulate": 8, "touch_maneuver": 0,
    }


def passing_trend_rows() -> list[dict]:
    """A synthetic results table engineered to satisfy every trend check."""
    rows = []
    base = {"voice": 50.0, "menu": 60.0, "subtle": 52.0, "fixed": 51.0,
            "proactive": 44.0, "distance": 45.0, "gaze": 47.0,
            "proximity": 46.0}
    for tech in ALL_TECHNIQUE_NAMES:
        for task in ("coupled", "decoupled"):
            for pl in ("scattered", "sorted"):
                completion = base[tech]
                completion += 2.0 if task == "coupled" else 0.0
                completion += 1.5 if pl == "scattered" else 0.0
                implicit = tech in ("proactive", "distance", "gaze",
                                    "proximity")
                errors = (2 if task == "coupled" else 1) if implicit else 0
                alloc = 13.0 if tech == "menu" else 1.0
                rows.append(trend_row(tech, task, pl, completion=completion,
                                      errors=errors, allocation_s=alloc))
                if implicit:
                    rows.append(trend_row(tech, task, pl, model="guardian",
                                          completion=completion, errors=0,
                                          allocation_s=alloc))
    return rows
