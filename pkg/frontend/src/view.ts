/* Client view state.
 *
 * A plain mutable record: the latest authoritative diff, the trial
 * setup, connection status, and a handful of presentation extras
 * (derived territory, recent warnings, the completion report). There is
 * no client-side prediction; every field here either came off the wire
 * or is a pure function of something that did.
 */

import type {
  StateDiff, TrialDone, TrialSetup,
} from "./protocol.js";
import type { ConnectionStatus } from "./session.js";
import type { TerritoryCode } from "./territory.js";
import { territoryFor, heatIntensity } from "./territory.js";

const MAX_WARNINGS = 5;

export interface ViewState {
  status: ConnectionStatus;
  setup: TrialSetup | null;
  diff: StateDiff | null;
  /** Client-derived classification of the current score field. */
  territory: TerritoryCode[] | null;
  /** Per-region score peaks scaling overlay opacity. */
  intensity: number[] | null;
  done: TrialDone | null;
  warnings: string[];
}

export function newViewState(): ViewState {
  return {
    status: "connecting",
    setup: null,
    diff: null,
    territory: null,
    intensity: null,
    done: null,
    warnings: [],
  };
}

export function onStatus(v: ViewState, status: ConnectionStatus): void {
  v.status = status;
}

export function onDiff(v: ViewState, diff: StateDiff): void {
  if (diff.setup) {
    v.setup = diff.setup;
    v.done = null;
  }
  v.diff = diff;
  if (v.setup) {
    const grid = {
      rows: v.setup.sim.grid_rows,
      cols: v.setup.sim.grid_cols,
      tableW: v.setup.sim.table_w,
      tableH: v.setup.sim.table_h,
    };
    v.territory = territoryFor(
      v.setup.technique, diff.heat, v.setup.params, grid);
    v.intensity = heatIntensity(diff.heat);
  }
}

export function onDone(v: ViewState, done: TrialDone): void {
  v.done = done;
}

export function noteWarning(v: ViewState, message: string): void {
  v.warnings.push(message);
  if (v.warnings.length > MAX_WARNINGS) v.warnings.shift();
}

export interface HudRow {
  label: string;
  value: string;
}

/** HUD panel rows from the latest diff, in display order. */
export function hudRows(diff: StateDiff | null): HudRow[] {
  if (diff === null) {
    return [
      { label: "elapsed", value: "0.0 s" },
      { label: "your idle", value: "0%" },
      { label: "robot idle", value: "0%" },
      { label: "concurrent", value: "0%" },
      { label: "robot errors", value: "0" },
      { label: "blocks left", value: "-" },
    ];
  }
  const h = diff.hud;
  return [
    { label: "elapsed", value: `${h.elapsed_s.toFixed(1)} s` },
    { label: "your idle", value: `${h.user_idle_pct.toFixed(0)}%` },
    { label: "robot idle", value: `${h.robot_idle_pct.toFixed(0)}%` },
    { label: "concurrent", value: `${h.concurrent_pct.toFixed(0)}%` },
    { label: "robot errors", value: `${h.errors}` },
    { label: "blocks left", value: `${h.remaining}` },
  ];
}

/** Final-report rows for the completion banner. */
export function reportRows(done: TrialDone): HudRow[] {
  const rows: HudRow[] = [
    { label: "completed", value: done.completed ? "yes" : "no" },
    { label: "ticks", value: `${done.tick}` },
  ];
  const r = done.report;
  if (r) {
    const num = (k: string) =>
      typeof r[k] === "number" ? (r[k] as number) : null;
    const t = num("completion_time_s");
    if (t !== null) rows.push({ label: "time", value: `${t.toFixed(1)} s` });
    const pairs: [string, string][] = [
      ["user_idle_pct", "your idle"],
      ["robot_idle_pct", "robot idle"],
      ["concurrent_activity_pct", "concurrent"],
    ];
    for (const [key, label] of pairs) {
      const val = num(key);
      if (val !== null) rows.push({ label, value: `${val.toFixed(1)}%` });
    }
    const errs = num("robot_errors");
    if (errs !== null) rows.push({ label: "robot errors", value: `${errs}` });
  }
  return rows;
}
