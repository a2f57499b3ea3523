"""Fixed-tick simulation engine, trial runner and log replay.

Each 50 ms tick runs four phases in a fixed order: human action progress
and effects, robot action progress and effects, score-field dynamics,
then the robot decision. Actions occupy whole ticks, apply their world
effect atomically on their final tick, and are logged on completion.
Everything random flows through one generator seeded from the scenario
seed, so identical configurations produce byte-identical logs.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import asdict

import numpy as np

from .config import (DEFAULT_MOTION, DEFAULT_POLICY, DEFAULT_SIM, MotionModel,
                     PolicyParams, SimParams)
from .events import ActionRecord, EventLog, ENGINE_VERSION
from .geometry import RegionGrid, dist
from .humans import HumanModel, gaze_point, human_policy_step
from .policies import Technique, make_policy
from .robot import attempt_pick, motion_ticks, robot_decide
from .scorefield import classify_gaze, classify_proximity
from .workspace import (Actor, Assignment, Block, BlockState, Color,
                        GoalStructure, Placement, TaskConfig, TaskType,
                        WorldState, apply_assignment, generate_scenario,
                        placement_legal, task_complete, world_to_dict)

__all__ = ["Engine", "ScriptedController", "run_trial", "replay",
           "replay_with_field", "ReplayError", "world_equal"]


class ReplayError(Exception):
    def __init__(self, tick: int, message: str):
        super().__init__(f"tick {tick}: {message}")
        self.tick = tick


class _Active:
    __slots__ = ("kind", "target", "dest", "remaining", "total", "start",
                 "choice", "traj", "focus", "block")

    def __init__(self, kind, target, dest, duration, start, choice=None,
                 traj=None, focus=None, block=None):
        self.kind = kind
        self.target = target
        self.dest = dest
        self.remaining = duration
        self.total = duration
        self.start = start
        self.choice = choice
        self.traj = traj
        self.focus = focus
        self.block = block


class _ActorRt:
    """Engine-side execution slot for one actor."""

    __slots__ = ("actor", "st", "speed", "pick_ticks", "place_ticks",
                 "current", "plan", "next_start", "busy_end", "active_tick",
                 "remote_busy")

    def __init__(self, actor: Actor, state, speed: float, pick_ticks: int,
                 place_ticks: int):
        self.actor = actor
        self.st = state                  # UserState or RobotState in the world
        self.speed = speed
        self.pick_ticks = pick_ticks
        self.place_ticks = place_ticks
        self.current: _Active | None = None
        self.plan: deque = deque()
        self.next_start = 0
        self.busy_end = 0
        self.active_tick = -1
        self.remote_busy = False

    @property
    def free(self) -> bool:
        return self.current is None and not self.plan


class ScriptedController:
    """Drives the human from a scripted behavior model."""

    def __init__(self, model: HumanModel):
        self.model = model

    def model_dict(self) -> dict:
        return asdict(self.model)

    def begin_tick(self, eng: "Engine", tick: int) -> None:
        pass

    def next_intent(self, eng: "Engine"):
        return human_policy_step(self.model, eng.world, eng.policy, eng.field,
                                 eng.sim, eng.params,
                                 robot_idle=eng.robot_idle_now)

    def gaze(self, eng: "Engine", tick: int) -> tuple[float, float] | None:
        cur = eng.user_rt.current
        focus = cur.focus if cur is not None else None
        return gaze_point(self.model, focus, tick, eng.sim.tick_s)


class Engine:
    def __init__(self, world: WorldState, technique: Technique | str,
                 controller, *, sim: SimParams = DEFAULT_SIM,
                 motion: MotionModel = DEFAULT_MOTION,
                 params: PolicyParams = DEFAULT_POLICY,
                 human: HumanModel | None = None,
                 tick_limit: int = 12000,
                 checkpoint_fields: bool = False):
        self.world = world
        self.sim = sim
        self.motion = motion
        self.params = params
        self.tick_limit = tick_limit
        self.checkpoint_fields = checkpoint_fields
        self.grid = RegionGrid(sim.grid_rows, sim.grid_cols,
                               sim.table_w, sim.table_h)
        self.policy = make_policy(technique, params, sim, self.grid)
        self.field = self.policy.make_field(sim.tick_s)
        self.rng = np.random.default_rng(
            np.random.SeedSequence([world.config.seed, 1]))
        self.controller = controller
        human = human or getattr(controller, "model", None) or HumanModel()
        ts = sim.tick_s
        self.user_rt = _ActorRt(
            Actor.USER, world.user,
            speed=motion.reach_speed * human.speed_multiplier,
            pick_ticks=max(1, round(human.pick_place_s / ts)),
            place_ticks=max(1, round(human.pick_place_s / ts)))
        self.robot_rt = _ActorRt(
            Actor.ROBOT, world.robot,
            speed=motion.reach_speed,
            pick_ticks=max(1, round(motion.pick_s / ts)),
            place_ticks=max(1, round(motion.place_s / ts)))
        self._voice_ticks = max(1, round(params.voice_utterance_s / ts))
        self._dwell_ticks = (round(params.menu_dwell_s / ts)
                             + max(1, round(human.menu_select_s / ts)))
        self._gesture_window_ticks = round(params.gesture_window_s / ts)
        self.target: int | None = None          # robot's current objective
        self._pickups: list[tuple[Actor, float, float]] = []
        self.log = EventLog.for_trial(
            world, Technique(technique).value, controller.model_dict(),
            sim, motion, params, tick_limit)
        # live HUD tallies; the authoritative numbers come from the log
        self.user_active_ticks = 0
        self.robot_active_ticks = 0
        self.concurrent_ticks = 0

    # -- public properties -------------------------------------------------

    @property
    def robot_idle_now(self) -> bool:
        r = self.world.robot
        return (self.robot_rt.free and not r.queue and r.held is None
                and self.target is None)

    # -- logging helpers ---------------------------------------------------

    def _emit(self, rt: _ActorRt, rec: ActionRecord, tick: int) -> None:
        if rec.start > rt.busy_end:
            self.log.act(tick, ActionRecord(rt.actor.value, "idle", None,
                                            rt.busy_end, rec.start))
        self.log.act(tick, rec)
        rt.busy_end = rec.end

    def _emit_alloc(self, tick: int, block: int, to: Assignment,
                    cause: str, enqueue: bool) -> None:
        self.log.alloc(tick, block, to.value, cause)
        apply_assignment(self.world, block, to, enqueue=enqueue)

    # -- plan compilation --------------------------------------------------

    def _compile_user(self, intent) -> deque:
        w = self.world
        plan: deque = deque()
        k = intent.kind
        if k in ("idle", "wait_holding"):
            return plan
        if k == "build":
            b = w.blocks[intent.block]
            s = w.structures[intent.structure]
            plan.append(("reach", b.id, (b.x, b.y), None))
            plan.append(("pick", b.id, None, None))
            plan.append(("reach", s.id, (s.base_x, s.base_y), None))
            plan.append(("place", s.id, None, None))
        elif k == "place_held":
            s = w.structures[intent.structure]
            plan.append(("reach", s.id, (s.base_x, s.base_y), None))
            plan.append(("place", s.id, None, None))
        elif k == "voice":
            plan.append(("voice", intent.label, None, None))
        elif k == "menu":
            b = w.blocks[intent.block]
            plan.append(("reach", b.id, (b.x, b.y), None))
            plan.append(("dwell", b.id, None, intent.choice))
        elif k in ("push", "move"):
            b = w.blocks[intent.block]
            plan.append(("reach", b.id, (b.x, b.y), None))
            plan.append(("pick", b.id, None, None))
            plan.append(("maneuver", b.id, intent.dest, None))
        else:
            raise RuntimeError(f"unknown human intent {k!r}")
        return plan

    # -- primitive lifecycle -----------------------------------------------

    def _start_prim(self, rt: _ActorRt, prim, tick: int) -> _Active | None:
        kind, target, dest, choice = prim
        st = rt.st
        if kind == "reach":
            dur = motion_ticks(dist(st.x, st.y, dest[0], dest[1]),
                               rt.speed, self.sim.tick_s)
            if dur == 0:
                st.x, st.y = dest
                return None                     # chain into the next primitive
            return _Active("reach", target, dest, dur, tick, focus=dest)
        if kind == "pick":
            b = self.world.blocks.get(target)
            reason = self._pick_block_issue(rt, b)
            if reason is not None:
                self.log.abort(tick, rt.actor.value, target, reason)
                rt.plan.clear()
                if rt.actor is Actor.ROBOT:
                    self.target = None
                return None
            return _Active("pick", target, None, rt.pick_ticks, tick,
                           focus=(st.x, st.y))
        if kind == "place":
            return _Active("place", target, None, rt.place_ticks, tick,
                           focus=(st.x, st.y))
        if kind == "maneuver":
            b = self.world.blocks[target]
            dur = motion_ticks(dist(st.x, st.y, dest[0], dest[1]),
                               rt.speed, self.sim.tick_s)
            traj = None
            if self.policy.technique is Technique.SUBTLE:
                traj = [(tick, b.x, b.y)]
            if dur == 0:
                act = _Active("maneuver", target, dest, 0, tick, traj=traj)
                self._finish_prim(rt, act, tick)
                return None
            return _Active("maneuver", target, dest, dur, tick, traj=traj,
                           focus=dest)
        if kind == "dwell":
            b = self.world.blocks[target]
            return _Active("dwell", target, None, self._dwell_ticks, tick,
                           choice=choice, focus=(b.x, b.y))
        if kind == "voice":
            focus = (st.x, st.y)
            for b in self.world.blocks.values():
                if b.label == target and b.on_table:
                    focus = (b.x, b.y)
                    break
            return _Active("voice", target, None, self._voice_ticks, tick,
                           focus=focus)
        raise RuntimeError(f"unknown primitive {kind!r}")

    def _pick_block_issue(self, rt: _ActorRt, b: Block | None) -> str | None:
        if b is None or not b.on_table:
            return "gone"
        if dist(rt.st.x, rt.st.y, b.x, b.y) > self.sim.grasp_radius + 1e-9:
            return "moved"
        if rt.actor is Actor.ROBOT:
            if b.assignment is Assignment.USER:
                return "reassigned"
            if b.id in self.world.robot.never_retry:
                return "withdrawn"
        return None

    def _progress(self, rt: _ActorRt, tick: int) -> None:
        w = self.world
        while True:
            if rt.current is None:
                if not rt.plan or rt.next_start > tick:
                    return
                act = self._start_prim(rt, rt.plan.popleft(), tick)
                if act is None:
                    continue
                rt.current = act
            act = rt.current
            st = rt.st
            if act.dest is not None:            # one tick of straight motion
                step = rt.speed * self.sim.tick_s
                dx = act.dest[0] - st.x
                dy = act.dest[1] - st.y
                d = math.hypot(dx, dy)
                if d <= step:
                    st.x, st.y = act.dest
                else:
                    st.x += step * dx / d
                    st.y += step * dy / d
                if st.held is not None:
                    blk = w.blocks[st.held]
                    blk.x, blk.y = st.x, st.y
                    if act.traj is not None:
                        act.traj.append((tick, blk.x, blk.y))
            act.remaining -= 1
            rt.active_tick = tick
            if act.remaining > 0:
                return
            rt.current = None
            rt.next_start = tick + 1
            self._finish_prim(rt, act, tick)

    def _finish_prim(self, rt: _ActorRt, act: _Active, tick: int) -> None:
        w = self.world
        st = rt.st
        end = tick + 1
        actor = rt.actor
        kind = act.kind
        if kind == "reach":
            st.x, st.y = act.dest
            if st.held is not None:
                blk = w.blocks[st.held]
                blk.x, blk.y = st.x, st.y
            self._emit(rt, ActionRecord(actor.value, "reach", act.target,
                                        act.start, end, dest=act.dest), tick)
        elif kind == "pick":
            self._finish_pick(rt, act, tick)
        elif kind == "place":
            self._finish_place(rt, act, tick)
        elif kind == "maneuver":
            b = w.blocks[act.target]
            b.x, b.y = act.dest
            b.state = BlockState.ON_TABLE
            b.holder = None
            st.held = None
            self._emit(rt, ActionRecord(actor.value, "maneuver", act.target,
                                        act.start, end, dest=act.dest), tick)
            self._release_hooks(act.target, act.traj, tick)
        elif kind == "dwell":
            b = w.blocks.get(act.target)
            fired = act.total >= round(self.params.menu_dwell_s / self.sim.tick_s)
            self._emit(rt, ActionRecord(actor.value, "menu_dwell", act.target,
                                        act.start, end,
                                        choice=(act.choice.value if act.choice else None),
                                        fired=fired), tick)
            if fired and b is not None and b.on_table:
                from .policies import menu_interact
                ev = menu_interact(w, act.target, act.total, act.choice,
                                   self.params, self.sim.tick_s)
                if ev is not None:
                    self._emit_alloc(tick, ev.block, ev.to, ev.cause, enqueue=True)
        elif kind == "voice":
            self._emit(rt, ActionRecord(actor.value, "allocate_gesture",
                                        act.target, act.start, end), tick)
            from .policies import voice_allocate
            ev = voice_allocate(w, act.target)
            if ev is not None:
                self._emit_alloc(tick, ev.block, ev.to, ev.cause, enqueue=True)

    def _release_hooks(self, target: int, traj, tick: int) -> None:
        traj_s = None
        if traj is not None:
            ts = self.sim.tick_s
            horizon = (tick - self._gesture_window_ticks)
            traj_s = [(t * ts, x, y) for t, x, y in traj if t >= horizon]
        ev = self.policy.on_release(self.world, target, traj_s)
        if ev is not None:
            self._emit_alloc(tick, ev.block, ev.to, ev.cause, enqueue=True)

    def _finish_pick(self, rt: _ActorRt, act: _Active, tick: int) -> None:
        w = self.world
        b = w.blocks.get(act.target)
        end = tick + 1
        actor = rt.actor
        if b is None or not b.on_table or \
                dist(rt.st.x, rt.st.y, b.x, b.y) > self.sim.grasp_radius + 1e-9:
            self._emit(rt, ActionRecord(actor.value, "pick", act.target,
                                        act.start, end, outcome="aborted"), tick)
            rt.plan.clear()
            if actor is Actor.ROBOT:
                self.target = None
            return
        if actor is Actor.USER:
            px, py = b.x, b.y
            b.state = BlockState.HELD
            b.holder = Actor.USER
            w.user.held = b.id
            if b.id in w.robot.queue:
                w.robot.queue.remove(b.id)
            self._pickups.append((Actor.USER, px, py))
            self._emit(rt, ActionRecord("user", "pick", b.id, act.start, end,
                                        outcome="ok"), tick)
            return
        # robot grasp: color check first, then grasp reliability
        px, py = b.x, b.y
        draw = float(self.rng.random()) if b.color is Color.BLACK else 0.0
        outcome = attempt_pick(w, b, draw, self.motion)
        self._emit(rt, ActionRecord("robot", "pick", b.id, act.start, end,
                                    outcome=("ok" if outcome.result == "success"
                                             else outcome.result)), tick)
        if outcome.result == "success":
            self._pickups.append((Actor.ROBOT, px, py))
            self.target = None
            rt.plan.clear()
        elif outcome.result == "fail_yellow":
            self._emit_alloc(tick, b.id, Assignment.UNASSIGNED, "fail_yellow",
                             enqueue=False)
            self.target = None
            rt.plan.clear()
        # fail_random: keep the target and retry on the next decision

    def _finish_place(self, rt: _ActorRt, act: _Active, tick: int) -> None:
        w = self.world
        st = rt.st
        s = w.structures[act.target]
        if st.held is None:
            raise RuntimeError("place scheduled with empty hand")
        b = w.blocks[st.held]
        if not placement_legal(w, rt.actor, b, s):
            raise RuntimeError(
                f"illegal placement scheduled: {rt.actor.value} block {b.id} "
                f"on structure {s.id}")
        b.slot = s.filled
        s.filled += 1
        b.state = BlockState.PLACED
        b.structure = s.id
        b.holder = None
        b.x, b.y = s.base_x, s.base_y
        st.held = None
        if b.id in w.robot.queue:
            w.robot.queue.remove(b.id)
        self._emit(rt, ActionRecord(rt.actor.value, "place", s.id, act.start,
                                    tick + 1, block=b.id), tick)

    # -- robot decision ----------------------------------------------------

    def _robot_decision_phase(self, tick: int) -> None:
        rt = self.robot_rt
        if not rt.free or rt.next_start > tick:
            return
        d = robot_decide(self.world, self.policy, self.field, self.target)
        if d.kind == "idle":
            self.target = None
            return
        if d.kind == "fetch":
            b = self.world.blocks[d.block]
            if d.selected:
                self._emit_alloc(tick, b.id, Assignment.ROBOT,
                                 self.policy.technique.value, enqueue=False)
            self.target = b.id
            rt.plan = deque([("reach", b.id, (b.x, b.y), None),
                             ("pick", b.id, None, None)])
        else:                                   # deliver the held block
            s = self.world.structures[d.structure]
            rt.plan = deque([("reach", s.id, (s.base_x, s.base_y), None),
                             ("place", s.id, None, None)])
        self._progress(rt, tick)

    # -- tick loop ---------------------------------------------------------

    def step(self) -> None:
        w = self.world
        tick = w.tick
        complete = task_complete(w)
        self.controller.begin_tick(self, tick)

        # phase 1: human
        urt = self.user_rt
        if not complete and urt.free and urt.next_start <= tick:
            urt.plan = self._compile_user(self.controller.next_intent(self))
        self._progress(urt, tick)

        # phase 2: robot action progress
        self._progress(self.robot_rt, tick)

        # phase 3: score-field dynamics
        if self.field is not None:
            gz = None
            region = None
            if self.field.track_gaze:
                gz = self.controller.gaze(self, tick)
                if gz is not None:
                    region = self.grid.index_at(gz[0], gz[1])
            self.field.tick_update(self._pickups, region)
            if self.field.track_gaze:
                self.log.gaze(tick, gz)
            if self.checkpoint_fields:
                self._emit_field_checkpoint(tick)
        self._pickups.clear()

        # phase 4: robot decision
        if not task_complete(w):
            self._robot_decision_phase(tick)

        ua = urt.active_tick == tick or urt.remote_busy
        ra = self.robot_rt.active_tick == tick
        self.user_active_ticks += ua
        self.robot_active_ticks += ra
        self.concurrent_ticks += ua and ra
        w.tick = tick + 1

    def field_snapshot(self) -> dict | None:
        """Score arrays plus the per-region territory classification, or
        None for techniques that keep no field."""
        f = self.field
        if f is None:
            return None
        if f.track_gaze:
            means = f.gaze_means()
            return {"gaze": [float(v) for v in means],
                    "territory": [int(v) for v in classify_gaze(means,
                                                                self.params)]}
        return {"user": [float(v) for v in f.user_score],
                "robot": [float(v) for v in f.robot_score],
                "territory": [int(v) for v in classify_proximity(
                    f.user_score, f.robot_score, self.params)]}

    def _emit_field_checkpoint(self, tick: int) -> None:
        self.log.field_checkpoint(tick, self.field_snapshot())

    def finalize(self) -> EventLog:
        """Close out the log: pad trailing idle time and append the end
        entry carrying final actor positions (in-flight motion otherwise
        leaves replay short of the live state)."""
        w = self.world
        end_tick = w.tick
        for rt in (self.user_rt, self.robot_rt):
            if end_tick > rt.busy_end:
                self.log.act(end_tick, ActionRecord(rt.actor.value, "idle",
                                                    None, rt.busy_end, end_tick))
                rt.busy_end = end_tick
        self.log.end(end_tick, task_complete(w), (w.user.x, w.user.y),
                     (w.robot.x, w.robot.y))
        return self.log

    def run(self, stop_tick: int | None = None) -> EventLog:
        w = self.world
        limit = self.tick_limit if stop_tick is None \
            else min(self.tick_limit, stop_tick)
        while w.tick < limit and not task_complete(w):
            self.step()
        return self.finalize()


def run_trial(world: WorldState, model: HumanModel, technique: Technique | str,
              *, sim: SimParams = DEFAULT_SIM,
              motion: MotionModel = DEFAULT_MOTION,
              params: PolicyParams = DEFAULT_POLICY,
              tick_limit: int = 12000, checkpoint_fields: bool = False):
    """Simulate one full trial; returns (TrialResult, EventLog)."""
    from .metrics import trial_result
    eng = Engine(world, technique, ScriptedController(model), sim=sim,
                 motion=motion, params=params, human=model,
                 tick_limit=tick_limit, checkpoint_fields=checkpoint_fields)
    log = eng.run()
    return trial_result(log), log


# ---------- replay ----------

def _world_from_header(header: dict) -> tuple[WorldState, SimParams,
                                              PolicyParams, str]:
    cfg = TaskConfig(task_type=TaskType(header["config"]["task_type"]),
                     placement=Placement(header["config"]["placement"]),
                     seed=header["config"]["seed"],
                     block_count=header["config"]["block_count"])
    sim_kwargs = dict(header["sim"])
    for key in ("robot_base", "user_anchor", "user_home"):
        sim_kwargs[key] = tuple(sim_kwargs[key])
    sim_kwargs["structure_bases"] = tuple(
        tuple(b) for b in sim_kwargs["structure_bases"])
    sim = SimParams(**sim_kwargs)
    params = PolicyParams(**header["params"])

    blocks: dict[int, Block] = {}
    for bid, bd in header["scenario"]["blocks"].items():
        blocks[int(bid)] = Block(
            id=int(bid), color=Color(bd["color"]), x=bd["x"], y=bd["y"],
            label=int(bid), state=BlockState(bd["state"]),
            holder=Actor(bd["holder"]) if bd["holder"] else None,
            structure=bd["structure"], slot=bd["slot"],
            assignment=Assignment(bd["assignment"]))
    structures = [GoalStructure(id=sd["id"], base_x=sd["base"][0],
                                base_y=sd["base"][1],
                                slots=tuple(Color(c) for c in sd["slots"]),
                                filled=sd["filled"])
                  for sd in header["scenario"]["structures"]]
    from .workspace import RobotState, UserState
    world = WorldState(
        config=cfg, blocks=blocks, structures=structures,
        user=UserState(x=sim.user_home[0], y=sim.user_home[1]),
        robot=RobotState(base_x=sim.robot_base[0], base_y=sim.robot_base[1],
                         x=sim.robot_base[0], y=sim.robot_base[1]))
    return world, sim, params, header["technique"]


def replay(log: EventLog) -> WorldState:
    world, _ = replay_with_field(log)
    return world


def replay_with_field(log: EventLog):
    """Rebuild the final world purely from the log, validating as it goes.

    No policy or model code runs here: every effect comes from an entry.
    Score-field state is reconstructed from pick and gaze entries with the
    same per-tick update order the live engine used; the second return
    value is that field (None for techniques without one).
    """
    world, sim, params, technique = _world_from_header(log.header)
    technique = Technique(technique)
    explicit = make_policy(technique, params, sim).explicit
    grid = RegionGrid(sim.grid_rows, sim.grid_cols, sim.table_w, sim.table_h)
    field = None
    if technique in (Technique.GAZE, Technique.PROXIMITY):
        from .scorefield import ScoreField
        field = ScoreField(grid, params, sim.tick_s,
                           track_gaze=technique is Technique.GAZE,
                           track_proximity=technique is Technique.PROXIMITY)

    by_tick: dict[int, list[dict]] = {}
    last_tick = -1
    end_entry = None
    for e in log.entries:
        tick = e.get("tick")
        if not isinstance(tick, int) or tick < last_tick:
            raise ReplayError(tick if isinstance(tick, int) else -1,
                              "entry ticks must be non-decreasing")
        last_tick = tick
        if e.get("t") == "end":
            if end_entry is not None:
                raise ReplayError(tick, "duplicate end entry")
            end_entry = e
        by_tick.setdefault(tick, []).append(e)

    end_tick = end_entry["tick"] if end_entry is not None else last_tick
    for t in range(max(end_tick, 0)):
        pickups: list[tuple[Actor, float, float]] = []
        gaze_pt = None
        for e in by_tick.get(t, ()):
            k = e["t"]
            if k == "act":
                _replay_act(world, e, t, pickups)
            elif k == "alloc":
                apply_assignment(world, e["block"], Assignment(e["to"]),
                                 enqueue=explicit)
            elif k == "gaze":
                gaze_pt = e["p"]
        if field is not None:
            region = None
            if gaze_pt is not None:
                region = grid.index_at(gaze_pt[0], gaze_pt[1])
            field.tick_update(pickups, region)
    world.tick = max(end_tick, 0)
    if end_entry is not None:
        world.user.x, world.user.y = end_entry["user"]
        world.robot.x, world.robot.y = end_entry["robot"]
        for st in (world.user, world.robot):
            if st.held is not None:
                b = world.blocks[st.held]
                b.x, b.y = st.x, st.y
    return world, field


def _replay_act(world: WorldState, e: dict, tick: int,
                pickups: list[tuple[Actor, float, float]]) -> None:
    actor = Actor(e["actor"])
    st = world.user if actor is Actor.USER else world.robot
    kind = e["kind"]
    if kind in ("idle", "allocate_gesture", "menu_dwell"):
        return
    if kind == "reach":
        st.x, st.y = e["dest"]
        if st.held is not None:
            b = world.blocks[st.held]
            b.x, b.y = st.x, st.y
        return
    if kind == "pick":
        outcome = e.get("outcome")
        b = world.blocks.get(e["target"])
        if outcome == "ok":
            if b is None or not b.on_table:
                raise ReplayError(tick, f"pick of unavailable block {e['target']}")
            pickups.append((actor, b.x, b.y))
            b.state = BlockState.HELD
            b.holder = actor
            st.held = b.id
            if b.id in world.robot.queue:
                world.robot.queue.remove(b.id)
        elif outcome == "fail_yellow":
            if b is None:
                raise ReplayError(tick, "failed pick of unknown block")
            world.robot.errors += 1
            world.robot.never_retry.add(b.id)
        elif outcome not in ("fail_random", "aborted"):
            raise ReplayError(tick, f"unknown pick outcome {outcome!r}")
        return
    if kind == "place":
        if st.held is None:
            raise ReplayError(tick, "place with empty hand")
        b = world.blocks[st.held]
        if e.get("block") != b.id:
            raise ReplayError(tick, "place of a block the actor is not holding")
        s = world.structures[e["target"]]
        if not placement_legal(world, actor, b, s):
            raise ReplayError(tick, f"illegal placement of block {b.id} "
                                    f"on structure {s.id}")
        b.slot = s.filled
        s.filled += 1
        b.state = BlockState.PLACED
        b.structure = s.id
        b.holder = None
        b.x, b.y = s.base_x, s.base_y
        st.held = None
        if b.id in world.robot.queue:
            world.robot.queue.remove(b.id)
        return
    if kind == "maneuver":
        b = world.blocks.get(e["target"])
        if b is None or st.held != b.id:
            raise ReplayError(tick, "maneuver release of a block not held")
        b.x, b.y = e["dest"]
        b.state = BlockState.ON_TABLE
        b.holder = None
        st.held = None
        return
    raise ReplayError(tick, f"unknown action kind {kind!r}")


def world_equal(a: WorldState, b: WorldState) -> bool:
    return world_to_dict(a) == world_to_dict(b)
