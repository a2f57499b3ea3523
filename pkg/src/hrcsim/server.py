"""Live-play session server.

One WebSocket session hosts one trial: the connected client plays the
human, the engine stays authoritative. Client inputs are queued as they
arrive, stamped with the next unexecuted tick, applied at that tick
boundary, and logged, so a live session's input stream replayed headlessly
(rerun_from_log) reproduces the identical event log byte for byte.

Message kinds (JSON, one object per frame):
  client -> server: hello, start_trial, input
  server -> client: hello, state_diff, trial_done, error

Inputs:
  {"kind": "grab",       "block": id}
  {"kind": "move",       "x": f, "y": f}
  {"kind": "release"}                       (optionally with x/y)
  {"kind": "dwell_start","block": id}
  {"kind": "menu_choice","choice": "to_robot"|"to_self"|"cancel"}
  {"kind": "voice",      "label": n}
  {"kind": "gaze",       "x": f, "y": f}
Extra keys (client timestamps etc.) ride along into the log untouched.
"""
from __future__ import annotations

import asyncio
import itertools
import json
import os
from collections import deque
from dataclasses import asdict

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .config import DEFAULT_MOTION, DEFAULT_POLICY, DEFAULT_SIM, MotionModel, \
    PolicyParams
from .engine import Engine, _Active, _world_from_header
from .events import ENGINE_VERSION, ActionRecord, EventLog
from .geometry import clamp, dist
from .humans import HumanAction
from .policies import MenuChoice, Technique, menu_interact, voice_allocate
from .workspace import Actor, Assignment, BlockState, TaskConfig, \
    generate_scenario, placement_legal, task_complete

__all__ = ["RemoteHuman", "rerun_from_log", "create_app", "serve",
           "state_diff_payload"]

_IDLE = HumanAction(kind="idle")


class RemoteHuman:
    """Engine controller driven by tick-stamped client inputs.

    Grab, move and release act instantly (the cursor is the user's hand):
    the engine's timed primitives never run for this actor, records are
    emitted directly at input-application ticks. The rejection list holds
    inputs that were refused (unknown block, nothing held, busy); refused
    inputs are not logged, so live and headless reruns agree.
    """

    def __init__(self, script=None):
        self.pending: deque = deque(script or [])   # (tick, payload)
        self.live: deque = deque()                  # unstamped arrivals
        self.rejections: list[str] = []
        self.gaze_pt: tuple[float, float] | None = None
        self.drag_block: int | None = None
        self.drag_start = 0
        self.traj: list | None = None
        self.dwell_block: int | None = None
        self.dwell_start = 0

    def model_dict(self) -> dict:
        return {"kind": "remote"}

    def submit(self, payload: dict) -> None:
        self.live.append(payload)

    # -- controller interface ---------------------------------------------

    def begin_tick(self, eng: Engine, tick: int) -> None:
        while self.live:
            self.pending.append((tick, self.live.popleft()))
        while self.pending and self.pending[0][0] <= tick:
            _, payload = self.pending.popleft()
            err = self._apply(eng, tick, payload)
            if err is None:
                eng.log.input(tick, payload)
            else:
                self.rejections.append(err)

    def next_intent(self, eng: Engine) -> HumanAction:
        return _IDLE

    def gaze(self, eng: Engine, tick: int) -> tuple[float, float] | None:
        return self.gaze_pt

    # -- input application --------------------------------------------------

    def _apply(self, eng: Engine, tick: int, p: dict) -> str | None:
        kind = p.get("kind")
        if kind == "gaze":
            return self._gaze(eng, p)
        if kind == "move":
            return self._move(eng, tick, p)
        if kind == "grab":
            return self._grab(eng, tick, p)
        if kind == "release":
            return self._release(eng, tick, p)
        if kind == "dwell_start":
            return self._dwell_start(eng, tick, p)
        if kind == "menu_choice":
            return self._menu_choice(eng, tick, p)
        if kind == "voice":
            return self._voice(eng, tick, p)
        return f"unknown input kind {kind!r}"

    def _busy(self, eng: Engine, tick: int) -> str | None:
        # one user record may start per tick; dwell and drag are exclusive
        if self.drag_block is not None:
            return "already dragging a block"
        if self.dwell_block is not None:
            return "menu interaction in progress"
        if eng.user_rt.busy_end > tick:
            return "user action already recorded this tick"
        return None

    def _gaze(self, eng: Engine, p: dict) -> str | None:
        try:
            x, y = float(p["x"]), float(p["y"])
        except (KeyError, TypeError, ValueError):
            return "gaze input needs numeric x and y"
        self.gaze_pt = (clamp(x, 0.0, eng.sim.table_w),
                        clamp(y, 0.0, eng.sim.table_h))
        return None

    def _move(self, eng: Engine, tick: int, p: dict) -> str | None:
        try:
            x, y = float(p["x"]), float(p["y"])
        except (KeyError, TypeError, ValueError):
            return "move input needs numeric x and y"
        if self.dwell_block is not None:
            return None                  # cursor roams the menu; block stays
        st = eng.world.user
        st.x = clamp(x, 0.0, eng.sim.table_w)
        st.y = clamp(y, 0.0, eng.sim.table_h)
        if st.held is not None:
            b = eng.world.blocks[st.held]
            b.x, b.y = st.x, st.y
            if self.traj is not None:
                self.traj.append((tick, b.x, b.y))
        return None

    def _grab(self, eng: Engine, tick: int, p: dict) -> str | None:
        err = self._busy(eng, tick)
        if err:
            return err
        b = eng.world.blocks.get(p.get("block"))
        if b is None:
            return f"unknown block {p.get('block')!r}"
        if not b.on_table:
            return f"block {b.id} is not on the table"
        st = eng.world.user
        px, py = b.x, b.y
        st.x, st.y = px, py
        b.state = BlockState.HELD
        b.holder = Actor.USER
        st.held = b.id
        if b.id in eng.world.robot.queue:
            eng.world.robot.queue.remove(b.id)
        eng._pickups.append((Actor.USER, px, py))
        eng._emit(eng.user_rt, ActionRecord("user", "pick", b.id, tick,
                                            tick + 1, outcome="ok"), tick)
        eng.user_rt.remote_busy = True
        self.drag_block = b.id
        self.drag_start = tick
        self.traj = ([(tick, px, py)]
                     if eng.policy.technique is Technique.SUBTLE else None)
        return None

    def _release(self, eng: Engine, tick: int, p: dict) -> str | None:
        if self.drag_block is None:
            return "nothing is being dragged"
        if "x" in p and "y" in p:
            self._move(eng, tick, p)
        w = eng.world
        b = w.blocks[self.drag_block]
        start = self.drag_start + 1
        self.drag_block = None
        traj, self.traj = self.traj, None
        eng.user_rt.remote_busy = False

        snap = None
        for s in w.structures:
            d = dist(b.x, b.y, s.base_x, s.base_y)
            if d <= eng.sim.grasp_radius and \
                    placement_legal(w, Actor.USER, b, s) and \
                    (snap is None or d < snap[0]):
                snap = (d, s)
        if snap is not None:
            eng._finish_place(eng.user_rt,
                              _Active("place", snap[1].id, None, 0, start),
                              tick)
            return None
        b.state = BlockState.ON_TABLE
        b.holder = None
        w.user.held = None
        eng._emit(eng.user_rt, ActionRecord("user", "maneuver", b.id, start,
                                            tick + 1, dest=(b.x, b.y)), tick)
        eng._release_hooks(b.id, traj, tick)
        return None

    def _dwell_start(self, eng: Engine, tick: int, p: dict) -> str | None:
        err = self._busy(eng, tick)
        if err:
            return err
        b = eng.world.blocks.get(p.get("block"))
        if b is None:
            return f"unknown block {p.get('block')!r}"
        if not b.on_table:
            return f"block {b.id} is not on the table"
        st = eng.world.user
        st.x, st.y = b.x, b.y
        self.dwell_block = b.id
        self.dwell_start = tick
        eng.user_rt.remote_busy = True
        return None

    def _menu_choice(self, eng: Engine, tick: int, p: dict) -> str | None:
        if self.dwell_block is None:
            return "no menu interaction in progress"
        try:
            choice = MenuChoice(p.get("choice"))
        except ValueError:
            return f"unknown menu choice {p.get('choice')!r}"
        held_ticks = tick - self.dwell_start
        fired = held_ticks >= round(eng.params.menu_dwell_s / eng.sim.tick_s)
        block = self.dwell_block
        self.dwell_block = None
        eng.user_rt.remote_busy = False
        eng._emit(eng.user_rt,
                  ActionRecord("user", "menu_dwell", block, self.dwell_start,
                               tick + 1, choice=choice.value, fired=fired),
                  tick)
        b = eng.world.blocks.get(block)
        if fired and b is not None and b.on_table:
            ev = menu_interact(eng.world, block, held_ticks, choice,
                               eng.params, eng.sim.tick_s)
            if ev is not None:
                eng._emit_alloc(tick, ev.block, ev.to, ev.cause, enqueue=True)
        return None

    def _voice(self, eng: Engine, tick: int, p: dict) -> str | None:
        err = self._busy(eng, tick)
        if err:
            return err
        label = p.get("label")
        if not isinstance(label, int):
            return "voice input needs an integer label"
        eng._emit(eng.user_rt, ActionRecord("user", "allocate_gesture", label,
                                            tick, tick + 1), tick)
        ev = voice_allocate(eng.world, label)
        if ev is not None:
            eng._emit_alloc(tick, ev.block, ev.to, ev.cause, enqueue=True)
        return None


def rerun_from_log(live: EventLog) -> EventLog:
    """Re-simulate a live session from its logged inputs, headlessly.

    Returns a log that serializes byte-identically to the live one: same
    scenario, same input application ticks, same engine.
    """
    world, sim, params, technique = _world_from_header(live.header)
    motion = MotionModel(**live.header["motion"])
    script = [(e["tick"], e["payload"]) for e in live.entries
              if e["t"] == "input"]
    end_tick = None
    for e in live.entries:
        if e["t"] == "end":
            end_tick = e["tick"]
    eng = Engine(world, technique, RemoteHuman(script=script), sim=sim,
                 motion=motion, params=params,
                 tick_limit=live.header["tick_limit"])
    return eng.run(stop_tick=end_tick)


# ---------- state messages ----------

def state_diff_payload(eng: Engine, setup: bool = False) -> dict:
    w = eng.world
    tick = w.tick
    blocks = []
    for bid in sorted(w.blocks):
        b = w.blocks[bid]
        blocks.append({"id": b.id, "color": b.color.value, "label": b.label,
                       "p": [b.x, b.y], "state": b.state.value,
                       "assignment": b.assignment.value,
                       "structure": b.structure, "slot": b.slot})
    structures = [{"id": s.id, "base": [s.base_x, s.base_y],
                   "slots": [c.value for c in s.slots], "filled": s.filled}
                  for s in w.structures]
    remaining = sum(len(s.slots) - s.filled for s in w.structures)
    denom = max(tick, 1)
    hud = {"elapsed_s": round(tick * eng.sim.tick_s, 3),
           "user_idle_pct": round(100.0 * (tick - eng.user_active_ticks)
                                  / denom, 2),
           "robot_idle_pct": round(100.0 * (tick - eng.robot_active_ticks)
                                   / denom, 2),
           "concurrent_pct": round(100.0 * eng.concurrent_ticks / denom, 2),
           "errors": w.robot.errors,
           "remaining": remaining}
    heat = eng.field_snapshot()
    msg = {"k": "state_diff", "tick": tick,
           "user": {"p": [w.user.x, w.user.y], "held": w.user.held},
           "robot": {"p": [w.robot.x, w.robot.y], "held": w.robot.held,
                     "queue": list(w.robot.queue), "errors": w.robot.errors},
           "blocks": blocks, "structures": structures,
           "territory": None if heat is None else heat["territory"],
           "heat": heat, "hud": hud, "completed": task_complete(w)}
    if setup:
        msg["setup"] = {"technique": eng.policy.technique.value,
                        "model": eng.controller.model_dict(),
                        "sim": asdict(eng.sim), "params": asdict(eng.params),
                        "tick_limit": eng.tick_limit,
                        "version": ENGINE_VERSION}
    return msg


# ---------- websocket app ----------

def _err(message: str) -> str:
    return json.dumps({"k": "error", "message": message})


async def _reader(ws: WebSocket, q: asyncio.Queue) -> None:
    try:
        while True:
            q.put_nowait(await ws.receive_text())
    except WebSocketDisconnect:
        q.put_nowait(None)


def _build_engine(cfg: dict) -> tuple[Engine, RemoteHuman]:
    technique = Technique(cfg.get("technique", "fixed"))
    task = TaskConfig(task_type=cfg.get("task_type", "coupled"),
                      placement=cfg.get("placement", "scattered"),
                      seed=int(cfg.get("seed", 0)))
    params = (PolicyParams(**cfg["params"]) if cfg.get("params")
              else DEFAULT_POLICY)
    ctl = RemoteHuman()
    eng = Engine(generate_scenario(task), technique, ctl, sim=DEFAULT_SIM,
                 motion=DEFAULT_MOTION, params=params,
                 tick_limit=int(cfg.get("tick_limit", 12000)))
    return eng, ctl


def create_app(defaults: dict | None = None,
               log_dir: str | os.PathLike | None = None) -> FastAPI:
    """Session server; one trial per start_trial, engine authoritative.

    defaults seed the start_trial config (CLI flags); each start_trial
    message may override any of them, including pace_hz (0 = free-run).
    """
    app = FastAPI()
    app.state.defaults = dict(defaults or {})
    app.state.log_dir = None if log_dir is None else os.fspath(log_dir)
    app.state.session_ids = itertools.count()

    @app.websocket("/session")
    async def session(ws: WebSocket) -> None:  # pragma: no cover - thin shell
        await ws.accept()
        try:
            await _session_loop(app, ws)
        except WebSocketDisconnect:
            pass

    return app


def _flush_log(app: FastAPI, eng: Engine, session_id: int) -> str | None:
    log = eng.finalize()
    if app.state.log_dir is None:
        return None
    os.makedirs(app.state.log_dir, exist_ok=True)
    h = log.header
    name = (f"live_{h['technique']}_{h['config']['task_type']}_"
            f"{h['config']['placement']}_{h['config']['seed']}_"
            f"{session_id}.jsonl")
    path = os.path.join(app.state.log_dir, name)
    log.write(path)
    return path


async def _session_loop(app: FastAPI, ws: WebSocket) -> None:
    q: asyncio.Queue = asyncio.Queue()
    reader = asyncio.create_task(_reader(ws, q))
    session_id = next(app.state.session_ids)
    eng: Engine | None = None
    ctl: RemoteHuman | None = None
    tick_s = 0.05
    pace_hz = 0.0
    loop = asyncio.get_running_loop()
    try:
        while True:
            if eng is None:
                raw = await q.get()
                if raw is None:
                    return
                msg = _parse(raw)
                if isinstance(msg, str):
                    await ws.send_text(_err(msg))
                    continue
                k = msg.get("k")
                if k == "hello":
                    await ws.send_text(json.dumps(
                        {"k": "hello", "version": ENGINE_VERSION,
                         "techniques": [t.value for t in Technique]}))
                elif k == "start_trial":
                    cfg = {**app.state.defaults, **msg}
                    try:
                        eng, ctl = _build_engine(cfg)
                    except (ValueError, TypeError) as exc:
                        await ws.send_text(_err(f"bad trial config: {exc}"))
                        continue
                    tick_s = eng.sim.tick_s
                    pace_hz = float(cfg.get("pace_hz", 1.0 / tick_s))
                    await ws.send_text(json.dumps(
                        state_diff_payload(eng, setup=True)))
                else:
                    await ws.send_text(_err("no trial running"))
                continue

            # trial tick
            deadline = loop.time() + (1.0 / pace_hz if pace_hz > 0 else 0.0)
            disconnected = False
            while True:
                try:
                    raw = q.get_nowait()
                except asyncio.QueueEmpty:
                    break
                if raw is None:
                    disconnected = True
                    break
                msg = _parse(raw)
                if isinstance(msg, str):
                    await ws.send_text(_err(msg))
                elif msg.get("k") == "input":
                    ctl.submit({k: v for k, v in msg.items() if k != "k"})
                elif msg.get("k") == "start_trial":
                    await ws.send_text(_err("a trial is already running"))
                elif msg.get("k") == "hello":
                    await ws.send_text(json.dumps(
                        {"k": "hello", "version": ENGINE_VERSION,
                         "techniques": [t.value for t in Technique]}))
                else:
                    await ws.send_text(_err(f"unknown message kind "
                                            f"{msg.get('k')!r}"))
            if disconnected:
                return              # the finally block persists the partial

            eng.step()
            for r in ctl.rejections:
                await ws.send_text(_err(r))
            ctl.rejections.clear()
            await ws.send_text(json.dumps(state_diff_payload(eng)))

            if task_complete(eng.world) or eng.world.tick >= eng.tick_limit:
                path = _flush_log(app, eng, session_id)
                done = {"k": "trial_done", "tick": eng.world.tick,
                        "completed": task_complete(eng.world)}
                if eng.world.tick > 0:
                    from .metrics import fluency_report
                    done["report"] = asdict(fluency_report(eng.log))
                if path is not None:
                    done["log"] = os.path.basename(path)
                await ws.send_text(json.dumps(done))
                eng = ctl = None
                continue

            delay = deadline - loop.time()
            await asyncio.sleep(delay if delay > 0 else 0)
    finally:
        reader.cancel()
        # a trial still in flight (disconnect, send failure, shutdown)
        # persists as a partial log so the session can be rerun
        if eng is not None:
            _flush_log(app, eng, session_id)


def _parse(raw: str):
    try:
        msg = json.loads(raw)
    except json.JSONDecodeError:
        return "message is not valid JSON"
    if not isinstance(msg, dict):
        return "message must be a JSON object"
    return msg


def serve(host: str = "127.0.0.1", port: int = 8712,
          defaults: dict | None = None,
          log_dir: str | os.PathLike | None = None) -> None:
    import uvicorn
    uvicorn.run(create_app(defaults, log_dir), host=host, port=port,
                log_level="warning")
