/* Replay viewer state: rebuild per-tick frames from a trial log.
 *
 * Pure event application, no simulation: the board starts from the
 * header scenario and every state change comes from a logged entry.
 * Completed action records move blocks and fill structures; input
 * entries (live sessions only) drive the cursor tick by tick; gaze and
 * field entries attach the overlay data. Frame t shows the world after
 * t completed ticks, matching the tick numbering of live state diffs.
 *
 * Between record boundaries an actor in a reach or carry span is drawn
 * advancing straight toward the span endpoint at its logged speed. That
 * is how the engine moves actors, so span boundaries land exactly; the
 * in-between points are presentation.
 */

import type {
  ActEntry, EndEntry, FieldEntry, LogEntry, ScenarioStructure, TrialLog,
} from "./logfile.js";
import { endEntry } from "./logfile.js";
import type { AssignmentName, BlockColor, BlockPhase, Point } from "./protocol.js";

export interface ReplayBlock {
  id: number;
  color: BlockColor;
  label: number;
  p: Point;
  state: BlockPhase;
  holder: "user" | "robot" | null;
  assignment: AssignmentName;
  structure: number | null;
  slot: number | null;
}

export interface Frame {
  tick: number;
  blocks: ReplayBlock[];
  structures: ScenarioStructure[];
  user: Point;
  robot: Point;
  userHeld: number | null;
  robotHeld: number | null;
  gaze: Point | null;
  field: FieldEntry | null;
  completed: boolean;
}

function advanceToward(from: Point, to: Point, d: number): Point {
  const dx = to[0] - from[0];
  const dy = to[1] - from[1];
  const len = Math.hypot(dx, dy);
  if (len <= d || len === 0) return [to[0], to[1]];
  return [from[0] + (dx / len) * d, from[1] + (dy / len) * d];
}

interface ActorTrack {
  spans: ActEntry[];
  speed: number;        // m per second while reaching or carrying
}

export class ReplayPlayer {
  readonly log: TrialLog;
  readonly end: EndEntry | null;
  readonly lastTick: number;

  private readonly user: ActorTrack;
  private readonly robot: ActorTrack;

  constructor(log: TrialLog) {
    this.log = log;
    this.end = endEntry(log);
    let last = this.end ? this.end.tick : 0;
    for (const e of log.entries) last = Math.max(last, e.tick);
    this.lastTick = last;

    const reach = (log.header.motion.reach_speed as number) ?? 0.25;
    const mult = log.header.model.speed_multiplier;
    this.user = {
      spans: log.entries.filter(
        (e): e is ActEntry => e.t === "act" && e.actor === "user"),
      speed: reach * (typeof mult === "number" ? mult : 1),
    };
    this.robot = {
      spans: log.entries.filter(
        (e): e is ActEntry => e.t === "act" && e.actor === "robot"),
      speed: reach,
    };
  }

  get frameCount(): number {
    return this.lastTick + 1;
  }

  /** World after t completed ticks. */
  frame(t: number): Frame {
    const h = this.log.header;
    const blocks = new Map<number, ReplayBlock>();
    for (const [idStr, b] of Object.entries(h.scenario.blocks)) {
      const id = Number(idStr);
      blocks.set(id, {
        id, color: b.color, label: id, p: [b.x, b.y], state: b.state,
        holder: b.holder, assignment: b.assignment,
        structure: b.structure, slot: b.slot,
      });
    }
    const structures = h.scenario.structures.map((s) => ({
      ...s, base: [s.base[0], s.base[1]] as Point, slots: s.slots.slice(),
    }));
    const st: Frame = {
      tick: Math.min(t, this.lastTick),
      blocks: [],
      structures,
      user: [h.sim.user_home[0], h.sim.user_home[1]],
      robot: [h.sim.robot_base[0], h.sim.robot_base[1]],
      userHeld: null,
      robotHeld: null,
      gaze: null,
      field: null,
      completed: false,
    };

    for (const e of this.log.entries) {
      if (!visibleBy(e, t)) continue;
      this.apply(st, blocks, e);
    }
    if (this.end === null || t < this.end.tick) {
      this.interpolate(st, blocks, t);
    }
    st.blocks = [...blocks.values()].sort((a, b) => a.id - b.id);
    return st;
  }

  private apply(st: Frame, blocks: Map<number, ReplayBlock>, e: LogEntry): void {
    switch (e.t) {
      case "act":
        this.applyAct(st, blocks, e);
        break;
      case "alloc": {
        const b = blocks.get(e.block);
        if (b) b.assignment = e.to;
        break;
      }
      case "input":
        this.applyInput(st, blocks, e.payload);
        break;
      case "gaze":
        st.gaze = e.p === null ? null : [e.p[0], e.p[1]];
        break;
      case "field":
        st.field = e;
        break;
      case "end":
        st.completed = e.completed;
        st.user = [e.user[0], e.user[1]];
        st.robot = [e.robot[0], e.robot[1]];
        break;
      case "abort":
        break;          // the partial span's act record carries the state
    }
  }

  private applyAct(
    st: Frame, blocks: Map<number, ReplayBlock>, e: ActEntry,
  ): void {
    const isUser = e.actor === "user";
    const setPos = (p: Point) => {
      if (isUser) st.user = [p[0], p[1]];
      else st.robot = [p[0], p[1]];
    };
    switch (e.kind) {
      case "reach": {
        if (e.dest) setPos(e.dest);
        const heldId = isUser ? st.userHeld : st.robotHeld;
        const held = heldId === null ? undefined : blocks.get(heldId);
        if (held && e.dest) held.p = [e.dest[0], e.dest[1]];
        break;
      }
      case "pick": {
        if (e.outcome !== "ok" || e.target === null) break;
        const b = blocks.get(e.target);
        if (!b) break;
        setPos(b.p);
        b.state = "held";
        b.holder = e.actor;
        if (isUser) st.userHeld = b.id;
        else st.robotHeld = b.id;
        break;
      }
      case "maneuver": {
        if (e.target === null) break;
        const b = blocks.get(e.target);
        if (!b) break;
        if (e.dest) {
          b.p = [e.dest[0], e.dest[1]];
          setPos(e.dest);
        }
        b.state = "on_table";
        b.holder = null;
        if (isUser && st.userHeld === b.id) st.userHeld = null;
        if (!isUser && st.robotHeld === b.id) st.robotHeld = null;
        break;
      }
      case "place": {
        if (e.block === undefined || e.target === null) break;
        const b = blocks.get(e.block);
        const s = st.structures.find((x) => x.id === e.target);
        if (!b || !s) break;
        b.state = "placed";
        b.holder = null;
        b.structure = s.id;
        b.slot = s.filled;
        b.p = [s.base[0], s.base[1]];
        s.filled += 1;
        setPos(s.base);
        if (isUser && st.userHeld === b.id) st.userHeld = null;
        if (!isUser && st.robotHeld === b.id) st.robotHeld = null;
        break;
      }
      case "menu_dwell": {
        if (e.target === null) break;
        const b = blocks.get(e.target);
        if (b) setPos(b.p);
        break;
      }
      default:
        break;          // idle, allocate_gesture: no spatial effect
    }
  }

  /* Live-session cursor stream. State transitions still come from the
   * act records; inputs only place the cursor and a dragged block. */
  private applyInput(
    st: Frame, blocks: Map<number, ReplayBlock>, p: Record<string, unknown>,
  ): void {
    const kind = p.kind;
    if (kind === "move" || kind === "release") {
      if (typeof p.x === "number" && typeof p.y === "number") {
        st.user = [p.x, p.y];
        const held = st.userHeld === null ? undefined : blocks.get(st.userHeld);
        if (held) held.p = [p.x, p.y];
      }
    } else if (kind === "grab" || kind === "dwell_start") {
      const b = typeof p.block === "number" ? blocks.get(p.block) : undefined;
      if (b) st.user = [b.p[0], b.p[1]];
    }
  }

  /* Mid-span presentation: advance each actor toward its current span's
   * endpoint at the logged speed. Remote-human logs skip this; their
   * per-tick inputs already carry exact cursor motion. */
  private interpolate(
    st: Frame, blocks: Map<number, ReplayBlock>, t: number,
  ): void {
    const tickS = this.log.header.sim.tick_s;
    const remote = this.log.header.model.kind === "remote";
    for (const track of [this.user, this.robot]) {
      const isUser = track === this.user;
      if (remote && isUser) continue;
      const span = track.spans.find((s) => s.start <= t && t < s.end);
      if (!span) continue;
      const goal = this.spanGoal(span, blocks);
      if (!goal) continue;
      const from = isUser ? st.user : st.robot;
      const p = advanceToward(from, goal, (t - span.start) * track.speed * tickS);
      if (isUser) st.user = p;
      else st.robot = p;
      const heldId = isUser ? st.userHeld : st.robotHeld;
      const held = heldId === null ? undefined : blocks.get(heldId);
      if (held) held.p = [p[0], p[1]];
    }
  }

  private spanGoal(
    span: ActEntry, blocks: Map<number, ReplayBlock>,
  ): Point | null {
    if (span.kind === "reach" || span.kind === "maneuver") {
      return span.dest ?? null;
    }
    if (span.kind === "place") {
      const s = this.log.header.scenario.structures.find(
        (x) => x.id === span.target);
      return s ? s.base : null;
    }
    return null;        // pick, dwell, idle: stationary
  }
}

function visibleBy(e: LogEntry, t: number): boolean {
  if (e.t === "act") return e.end <= t;
  if (e.t === "end") return e.tick <= t;
  return e.tick < t;
}
