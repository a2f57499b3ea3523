"""Append-only trial log: JSON lines with a scenario header first.

Entry shapes (key order is fixed so identical trials serialize to
identical bytes):

  {"t":"header", "version", "technique", "model", "config", "sim",
   "motion", "params", "tick_limit", "scenario"}
  {"t":"act", "tick", "actor", "kind", "target", "start", "end",
   ["dest"], ["outcome"], ["choice"], ["fired"], ["block"]}
  {"t":"alloc", "tick", "block", "to", "cause"}
  {"t":"abort", "tick", "actor", "block", "reason"}
  {"t":"gaze", "tick", "p"}            (only when the gaze field is active)
  {"t":"input", "tick", "payload"}     (live sessions)
  {"t":"field", "tick", ...}           (optional score checkpoints)
  {"t":"end", "tick", "completed", "user", "robot"}

Action kinds: idle, reach, pick, place, maneuver, allocate_gesture,
menu_dwell. start/end are tick indices, end exclusive; per actor the
recorded spans tile the whole trial without overlap.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

from .config import MotionModel, PolicyParams, SimParams
from .workspace import TaskConfig, WorldState, world_to_dict

__all__ = ["ActionRecord", "EventLog", "MalformedLogError", "ENGINE_VERSION"]

ENGINE_VERSION = "0.1.0"

ACT_KINDS = {"idle", "reach", "pick", "place", "maneuver",
             "allocate_gesture", "menu_dwell"}


class MalformedLogError(Exception):
    pass


@dataclass(frozen=True)
class ActionRecord:
    actor: str
    kind: str
    target: int | None
    start: int
    end: int
    dest: tuple[float, float] | None = None
    outcome: str | None = None
    choice: str | None = None
    fired: bool | None = None
    block: int | None = None


def _scenario_payload(world: WorldState) -> dict:
    snap = world_to_dict(world)
    return {"blocks": snap["blocks"], "structures": snap["structures"]}


class EventLog:
    """In-memory trial log; serializes to JSONL and parses back."""

    def __init__(self, header: dict):
        self.header = header
        self.entries: list[dict] = []

    @classmethod
    def for_trial(cls, world: WorldState, technique: str, model_dict: dict,
                  sim: SimParams, motion: MotionModel, params: PolicyParams,
                  tick_limit: int) -> "EventLog":
        header = {
            "t": "header",
            "version": ENGINE_VERSION,
            "technique": technique,
            "model": model_dict,
            "config": {
                "task_type": world.config.task_type.value,
                "placement": world.config.placement.value,
                "seed": world.config.seed,
                "block_count": world.config.block_count,
            },
            "sim": asdict(sim),
            "motion": asdict(motion),
            "params": asdict(params),
            "tick_limit": tick_limit,
            "scenario": _scenario_payload(world),
        }
        # normalize tuples/enums to JSON shapes so a live header compares
        # equal to a parsed one
        return cls(json.loads(json.dumps(header)))

    # -- append helpers (fixed key order) ---------------------------------

    def act(self, tick: int, rec: ActionRecord) -> None:
        e = {"t": "act", "tick": tick, "actor": rec.actor, "kind": rec.kind,
             "target": rec.target, "start": rec.start, "end": rec.end}
        if rec.dest is not None:
            e["dest"] = [rec.dest[0], rec.dest[1]]
        if rec.outcome is not None:
            e["outcome"] = rec.outcome
        if rec.choice is not None:
            e["choice"] = rec.choice
        if rec.fired is not None:
            e["fired"] = rec.fired
        if rec.block is not None:
            e["block"] = rec.block
        self.entries.append(e)

    def alloc(self, tick: int, block: int, to: str, cause: str) -> None:
        self.entries.append({"t": "alloc", "tick": tick, "block": block,
                             "to": to, "cause": cause})

    def abort(self, tick: int, actor: str, block: int, reason: str) -> None:
        self.entries.append({"t": "abort", "tick": tick, "actor": actor,
                             "block": block, "reason": reason})

    def gaze(self, tick: int, p: tuple[float, float] | None) -> None:
        self.entries.append({"t": "gaze", "tick": tick,
                             "p": None if p is None else [p[0], p[1]]})

    def input(self, tick: int, payload: dict) -> None:
        self.entries.append({"t": "input", "tick": tick, "payload": payload})

    def field_checkpoint(self, tick: int, data: dict) -> None:
        self.entries.append({"t": "field", "tick": tick, **data})

    def end(self, tick: int, completed: bool, user_xy: tuple[float, float],
            robot_xy: tuple[float, float]) -> None:
        self.entries.append({"t": "end", "tick": tick, "completed": completed,
                             "user": [user_xy[0], user_xy[1]],
                             "robot": [robot_xy[0], robot_xy[1]]})

    # -- serialization ----------------------------------------------------

    def dumps(self) -> str:
        lines = [json.dumps(self.header, separators=(",", ":"))]
        lines.extend(json.dumps(e, separators=(",", ":")) for e in self.entries)
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def parse(cls, text: str) -> "EventLog":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise MalformedLogError("empty log")
        header = json.loads(lines[0])
        if header.get("t") != "header":
            raise MalformedLogError("first line is not a scenario header")
        out = cls(header)
        for ln in lines[1:]:
            out.entries.append(json.loads(ln))
        return out

    @classmethod
    def read(cls, path) -> "EventLog":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.parse(fh.read())

    def validate_order(self) -> None:
        last = -1
        for e in self.entries:
            t = e.get("tick")
            if not isinstance(t, int) or t < last:
                raise MalformedLogError(f"entry ticks must be non-decreasing: {e}")
            last = t
