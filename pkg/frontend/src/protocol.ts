/* Wire protocol spoken with the session server.
 *
 * Everything is JSON, one object per WebSocket frame, discriminated by
 * "k". The server is authoritative: the client renders state_diff
 * payloads verbatim and never predicts outcomes. Input payloads are the
 * exact objects the server logs, so a live session replays bit for bit.
 */

export type TechniqueName =
  | "voice" | "menu" | "subtle" | "fixed"
  | "proactive" | "distance" | "gaze" | "proximity";

export const TECHNIQUES: readonly TechniqueName[] = [
  "voice", "menu", "subtle", "fixed",
  "proactive", "distance", "gaze", "proximity",
];

export type BlockColor = "yellow" | "black";
export type BlockPhase = "on_table" | "held" | "placed";
export type AssignmentName = "unassigned" | "robot" | "user";
export type MenuChoiceName = "to_robot" | "to_self" | "cancel";

export type Point = [number, number];

export interface BlockView {
  id: number;
  color: BlockColor;
  label: number;
  p: Point;
  state: BlockPhase;
  assignment: AssignmentName;
  structure: number | null;
  slot: number | null;
}

export interface StructureView {
  id: number;
  base: Point;
  slots: BlockColor[];
  filled: number;
}

export interface HudView {
  elapsed_s: number;
  user_idle_pct: number;
  robot_idle_pct: number;
  concurrent_pct: number;
  errors: number;
  remaining: number;
}

/* Score-field snapshot riding on each diff; shape depends on which
 * field the technique keeps. territory uses the shared region codes. */
export interface GazeHeat {
  gaze: number[];
  territory: number[];
}

export interface ProximityHeat {
  user: number[];
  robot: number[];
  territory: number[];
}

export type Heat = GazeHeat | ProximityHeat | null;

export function isGazeHeat(h: Heat): h is GazeHeat {
  return h !== null && "gaze" in h;
}

export function isProximityHeat(h: Heat): h is ProximityHeat {
  return h !== null && "user" in h;
}

export interface SimSettings {
  tick_s: number;
  table_w: number;
  table_h: number;
  grid_rows: number;
  grid_cols: number;
  block_radius: number;
  min_spawn_separation: number;
  goal_clearance: number;
  grasp_radius: number;
  robot_base: Point;
  user_anchor: Point;
  user_home: Point;
  structure_bases: Point[];
}

export interface PolicySettings {
  gaze_window_s: number;
  infusion_radius: number;
  infusion_amplitude: number;
  decay_half_life_s: number;
  user_avoid_threshold: number;
  gesture_min_displacement: number;
  gesture_window_s: number;
  gesture_cone_half_angle_deg: number;
  menu_dwell_s: number;
  band_user_max: number;
  band_robot_min: number;
  classify_theta_user: number;
  classify_theta_robot: number;
  voice_utterance_s: number;
}

/* First diff of a trial carries the full configuration. */
export interface TrialSetup {
  technique: TechniqueName;
  model: { kind: string } & Record<string, unknown>;
  sim: SimSettings;
  params: PolicySettings;
  tick_limit: number;
  version: string;
}

export interface StateDiff {
  k: "state_diff";
  tick: number;
  user: { p: Point; held: number | null };
  robot: { p: Point; held: number | null; queue: number[]; errors: number };
  blocks: BlockView[];
  structures: StructureView[];
  territory: number[] | null;
  heat: Heat;
  hud: HudView;
  completed: boolean;
  setup?: TrialSetup;
}

export interface HelloReply {
  k: "hello";
  version: string;
  techniques: TechniqueName[];
}

export interface TrialDone {
  k: "trial_done";
  tick: number;
  completed: boolean;
  report?: Record<string, unknown>;
  log?: string;
}

export interface ErrorReply {
  k: "error";
  message: string;
}

export type ServerMessage = HelloReply | StateDiff | TrialDone | ErrorReply;

/* ---- client -> server ---- */

export type InputPayload =
  | { kind: "grab"; block: number }
  | { kind: "move"; x: number; y: number }
  | { kind: "release"; x?: number; y?: number }
  | { kind: "dwell_start"; block: number }
  | { kind: "menu_choice"; choice: MenuChoiceName }
  | { kind: "voice"; label: number }
  | { kind: "gaze"; x: number; y: number };

export interface TrialRequest {
  technique?: TechniqueName;
  task_type?: "coupled" | "decoupled";
  placement?: "scattered" | "sorted";
  seed?: number;
  tick_limit?: number;
  pace_hz?: number;
  params?: Partial<PolicySettings>;
}

export type ClientMessage =
  | { k: "hello" }
  | ({ k: "start_trial" } & TrialRequest)
  | ({ k: "input" } & InputPayload);

export class ProtocolError extends Error {}

const SERVER_KINDS = new Set(["hello", "state_diff", "trial_done", "error"]);

/** Parse one server frame; unknown or non-object payloads raise. */
export function decodeServerMessage(raw: string): ServerMessage {
  let msg: unknown;
  try {
    msg = JSON.parse(raw);
  } catch {
    throw new ProtocolError("server frame is not valid JSON");
  }
  if (typeof msg !== "object" || msg === null || Array.isArray(msg)) {
    throw new ProtocolError("server frame is not an object");
  }
  const k = (msg as { k?: unknown }).k;
  if (typeof k !== "string" || !SERVER_KINDS.has(k)) {
    throw new ProtocolError(`unknown server message kind ${JSON.stringify(k)}`);
  }
  return msg as ServerMessage;
}

export function encodeClientMessage(msg: ClientMessage): string {
  return JSON.stringify(msg);
}
