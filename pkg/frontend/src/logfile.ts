/* Trial log parsing.
 *
 * A trial log is JSON lines: one header object, then time-ordered
 * entries, normally closed by a single end entry. The header's scenario
 * section is a full snapshot of the starting board, which is what the
 * replay viewer reconstructs frames from.
 */

import type {
  AssignmentName, BlockColor, BlockPhase, PolicySettings, Point,
  SimSettings, TechniqueName,
} from "./protocol.js";

export interface ScenarioBlock {
  color: BlockColor;
  x: number;
  y: number;
  state: BlockPhase;
  holder: "user" | "robot" | null;
  structure: number | null;
  slot: number | null;
  assignment: AssignmentName;
}

export interface ScenarioStructure {
  id: number;
  base: Point;
  slots: BlockColor[];
  filled: number;
}

export interface LogHeader {
  t: "header";
  version: string;
  technique: TechniqueName;
  model: { kind: string } & Record<string, unknown>;
  config: {
    task_type: "coupled" | "decoupled";
    placement: "scattered" | "sorted";
    seed: number;
    block_count: number;
  };
  sim: SimSettings;
  motion: Record<string, number>;
  params: PolicySettings;
  tick_limit: number;
  scenario: {
    blocks: Record<string, ScenarioBlock>;
    structures: ScenarioStructure[];
  };
}

export interface ActEntry {
  t: "act";
  tick: number;
  actor: "user" | "robot";
  kind: string;
  target: number | null;
  start: number;
  end: number;
  dest?: Point;
  outcome?: string;
  choice?: string;
  fired?: boolean;
  block?: number;
}

export interface AllocEntry {
  t: "alloc";
  tick: number;
  block: number;
  to: "robot" | "user";
  cause: string;
}

export interface AbortEntry {
  t: "abort";
  tick: number;
  actor: "user" | "robot";
  block: number;
  reason: string;
}

export interface GazeEntry {
  t: "gaze";
  tick: number;
  p: Point | null;
}

export interface InputEntry {
  t: "input";
  tick: number;
  payload: Record<string, unknown>;
}

/* Per-tick score checkpoint; gaze logs carry {gaze}, proximity logs
 * {user, robot}, both carry the engine's territory classification. */
export interface FieldEntry {
  t: "field";
  tick: number;
  territory: number[];
  gaze?: number[];
  user?: number[];
  robot?: number[];
}

export interface EndEntry {
  t: "end";
  tick: number;
  completed: boolean;
  user: Point;
  robot: Point;
}

export type LogEntry =
  | ActEntry | AllocEntry | AbortEntry | GazeEntry
  | InputEntry | FieldEntry | EndEntry;

export interface TrialLog {
  header: LogHeader;
  entries: LogEntry[];
}

export class LogFormatError extends Error {}

const ENTRY_KINDS = new Set([
  "act", "alloc", "abort", "gaze", "input", "field", "end",
]);

/** Parse a full JSONL log text into header plus typed entries. */
export function parseLog(text: string): TrialLog {
  const lines = text.split("\n").filter((ln) => ln.trim() !== "");
  if (lines.length === 0) {
    throw new LogFormatError("log is empty");
  }
  const header = parseLine(lines[0], 1);
  if (header.t !== "header") {
    throw new LogFormatError("log does not start with a header entry");
  }
  const entries: LogEntry[] = [];
  for (let i = 1; i < lines.length; i++) {
    const e = parseLine(lines[i], i + 1);
    if (typeof e.t !== "string" || !ENTRY_KINDS.has(e.t)) {
      throw new LogFormatError(
        `line ${i + 1}: unknown entry kind ${JSON.stringify(e.t)}`);
    }
    if (typeof e.tick !== "number") {
      throw new LogFormatError(`line ${i + 1}: entry has no tick`);
    }
    entries.push(e as unknown as LogEntry);
  }
  return { header: header as unknown as LogHeader, entries };
}

function parseLine(line: string, lineno: number): Record<string, unknown> {
  let obj: unknown;
  try {
    obj = JSON.parse(line);
  } catch {
    throw new LogFormatError(`line ${lineno}: not valid JSON`);
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new LogFormatError(`line ${lineno}: entry is not an object`);
  }
  return obj as Record<string, unknown>;
}

/** The closing entry, or null for a log truncated mid-trial. */
export function endEntry(log: TrialLog): EndEntry | null {
  for (let i = log.entries.length - 1; i >= 0; i--) {
    const e = log.entries[i];
    if (e.t === "end") return e;
  }
  return null;
}

export function fieldEntries(log: TrialLog): FieldEntry[] {
  return log.entries.filter((e): e is FieldEntry => e.t === "field");
}
