/* Browser entry: wires the session client, input capture, renderer and
 * HUD into the page. Configuration comes from URL parameters:
 *
 *   ?server=ws://127.0.0.1:8712  session server address
 *   &technique=fixed             allocation technique for the trial
 *   &task=coupled                coupled | decoupled
 *   &placement=scattered         scattered | sorted
 *   &seed=0                      scenario seed
 *   &pace=20                     ticks per second (0 free-runs)
 *
 * Opening a .jsonl trial log with the file picker switches the board to
 * the replay viewer with a tick scrubber.
 */

import { TechniqueControls } from "./controls.js";
import { parseLog } from "./logfile.js";
import type { TechniqueName } from "./protocol.js";
import { TECHNIQUES } from "./protocol.js";
import { ReplayPlayer } from "./replay.js";
import type { Scene, Viewport } from "./render.js";
import { drawFrame, toTable } from "./render.js";
import { SessionClient } from "./session.js";
import { classifyBands, classifyGaze, classifyProximity } from "./territory.js";
import type { ViewState } from "./view.js";
import {
  hudRows, newViewState, noteWarning, onDiff, onDone, onStatus, reportRows,
} from "./view.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("board");
const ctx = canvas.getContext("2d");
if (!ctx) throw new Error("canvas 2d context unavailable");

const vp: Viewport = {
  width: canvas.width, height: canvas.height, margin: 30,
  tableW: 1, tableH: 1,
};

const qs = new URLSearchParams(window.location.search);
const technique = (TECHNIQUES as readonly string[]).includes(
  qs.get("technique") ?? "")
  ? (qs.get("technique") as TechniqueName) : "fixed";
const serverUrl = qs.get("server") ??
  `ws://${window.location.hostname || "127.0.0.1"}:8712`;

const view: ViewState = newViewState();
let replay: ReplayPlayer | null = null;
let replayTick = 0;
let localDrag: { x: number; y: number } | null = null;

/* ---- session wiring ---- */

const client = new SessionClient(() => new WebSocket(serverUrl), {
  onStatus(status) {
    onStatus(view, status);
    updateBanner();
  },
  onDiff(diff) {
    onDiff(view, diff);
    if (!diff.setup) return;
    vp.tableW = diff.setup.sim.table_w;
    vp.tableH = diff.setup.sim.table_h;
    controls.setMenuDwell(diff.setup.params.menu_dwell_s);
    startTicker(diff.setup.sim.tick_s);
    el("done").hidden = true;
  },
  onDone(done) {
    onDone(view, done);
    stopTicker();
    showReport();
  },
  onServerError(message) {
    noteWarning(view, `server: ${message}`);
    renderWarnings();
  },
  onWarning(message) {
    noteWarning(view, message);
    renderWarnings();
  },
});

const controls = new TechniqueControls({
  technique,
  menuDwellS: 0.8,      // refined from setup once the trial starts
  send(p) {
    if (view.status !== "open") {
      noteWarning(view, `disconnected, ${p.kind} input dropped`);
      renderWarnings();
      return;
    }
    client.sendInput(p);
  },
  onMenuOpen(block) {
    el("menu").hidden = false;
    el("menu-block").textContent = `block ${block}`;
  },
  onMenuClose() {
    el("menu").hidden = true;
  },
});

let ticker: number | null = null;

function startTicker(tickS: number): void {
  stopTicker();
  ticker = window.setInterval(() => controls.tickPulse(), tickS * 1000);
}

function stopTicker(): void {
  if (ticker !== null) {
    window.clearInterval(ticker);
    ticker = null;
  }
}

el<HTMLButtonElement>("start").addEventListener("click", () => {
  replay = null;
  el("done").hidden = true;
  el("replay-bar").hidden = true;
  client.startTrial({
    technique,
    task_type: qs.get("task") === "decoupled" ? "decoupled" : "coupled",
    placement: qs.get("placement") === "sorted" ? "sorted" : "scattered",
    seed: Number(qs.get("seed") ?? 0),
    pace_hz: qs.has("pace") ? Number(qs.get("pace")) : undefined,
  });
});

/* ---- pointer and keyboard ---- */

function tablePoint(ev: PointerEvent): [number, number] {
  const r = canvas.getBoundingClientRect();
  return toTable(vp, ev.clientX - r.left, ev.clientY - r.top);
}

function blockAt(x: number, y: number): number | null {
  const blocks = view.diff?.blocks ?? [];
  let best: number | null = null;
  let bestD = 0.05;             // grab within one grasp radius
  for (const b of blocks) {
    if (b.state !== "on_table") continue;
    const d = Math.hypot(b.p[0] - x, b.p[1] - y);
    if (d < bestD) {
      best = b.id;
      bestD = d;
    }
  }
  return best;
}

canvas.addEventListener("pointerdown", (ev) => {
  if (replay) return;
  canvas.setPointerCapture(ev.pointerId);
  const [x, y] = tablePoint(ev);
  controls.pointerDown(x, y, blockAt(x, y));
  if (controls.isDragging) localDrag = { x, y };
});

canvas.addEventListener("pointermove", (ev) => {
  if (replay) return;
  const [x, y] = tablePoint(ev);
  controls.pointerMove(x, y);
  if (controls.isDragging) localDrag = { x, y };
});

canvas.addEventListener("pointerup", (ev) => {
  if (replay) return;
  const [x, y] = tablePoint(ev);
  controls.pointerUp(x, y);
  localDrag = null;
});

for (const choice of ["to_robot", "to_self", "cancel"] as const) {
  el<HTMLButtonElement>(`menu-${choice}`).addEventListener("click", () => {
    controls.menuSelect(choice);
  });
}

window.addEventListener("keydown", (ev) => {
  if (ev.key >= "0" && ev.key <= "9") controls.keyDigit(ev.key);
  else if (ev.key === "Enter") controls.keyEnter();
  else if (ev.key === "Backspace") controls.keyBackspace();
  renderVoiceDraft();
});

/* ---- replay ---- */

el<HTMLInputElement>("logfile").addEventListener("change", async (ev) => {
  const input = ev.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  try {
    replay = new ReplayPlayer(parseLog(await file.text()));
  } catch (err) {
    noteWarning(view, `could not load log: ${(err as Error).message}`);
    renderWarnings();
    return;
  }
  stopTicker();
  replayTick = 0;
  const bar = el<HTMLInputElement>("replay-tick");
  bar.max = String(replay.lastTick);
  bar.value = "0";
  el("replay-bar").hidden = false;
  el("done").hidden = true;
});

el<HTMLInputElement>("replay-tick").addEventListener("input", (ev) => {
  replayTick = Number((ev.target as HTMLInputElement).value);
});

/* ---- drawing ---- */

function liveScene(): Scene | null {
  const diff = view.diff;
  const setup = view.setup ?? client.setup;
  if (!diff || !setup) return null;
  const user: [number, number] = localDrag
    ? [localDrag.x, localDrag.y]
    : [diff.user.p[0], diff.user.p[1]];
  const blocks = diff.blocks.map((b) => {
    // the in-flight drag leads the echo by a tick; draw it at the cursor
    if (localDrag && diff.user.held === b.id) {
      return { ...b, p: [localDrag.x, localDrag.y] as [number, number] };
    }
    return b;
  });
  return {
    gridRows: setup.sim.grid_rows,
    gridCols: setup.sim.grid_cols,
    blocks,
    structures: diff.structures,
    user,
    robot: diff.robot.p,
    robotBase: setup.sim.robot_base,
    territory: view.territory,
    intensity: view.intensity,
    gaze: null,
  };
}

function replayScene(): Scene | null {
  if (!replay) return null;
  const f = replay.frame(replayTick);
  const h = replay.log.header;
  let territory: ArrayLike<number> | null = null;
  let intensity: ArrayLike<number> | null = null;
  const grid = {
    rows: h.sim.grid_rows, cols: h.sim.grid_cols,
    tableW: h.sim.table_w, tableH: h.sim.table_h,
  };
  if (h.technique === "fixed") {
    territory = classifyBands(grid, h.params);
  } else if (f.field?.gaze) {
    territory = classifyGaze(f.field.gaze, h.params);
    intensity = f.field.gaze;
  } else if (f.field?.user && f.field.robot) {
    territory = classifyProximity(f.field.user, f.field.robot, h.params);
    intensity = f.field.user.map((u, i) =>
      Math.max(u, (f.field!.robot as number[])[i]));
  }
  el("replay-at").textContent =
    `tick ${f.tick} / ${replay.lastTick}` +
    (f.completed ? " (completed)" : "");
  return {
    gridRows: grid.rows,
    gridCols: grid.cols,
    blocks: f.blocks,
    structures: f.structures,
    user: f.user,
    robot: f.robot,
    robotBase: h.sim.robot_base,
    territory,
    intensity,
    gaze: f.gaze,
  };
}

function renderHud(): void {
  const rows = hudRows(view.diff);
  const dl = el("hud");
  dl.innerHTML = "";
  for (const row of rows) {
    const dt = document.createElement("dt");
    dt.textContent = row.label;
    const dd = document.createElement("dd");
    dd.textContent = row.value;
    dl.appendChild(dt);
    dl.appendChild(dd);
  }
}

function renderWarnings(): void {
  el("warnings").textContent = view.warnings.slice(-3).join("\n");
}

function renderVoiceDraft(): void {
  const box = el("voice-draft");
  box.textContent = technique === "voice" && controls.voiceDraft
    ? `say: ${controls.voiceDraft}` : "";
}

function updateBanner(): void {
  const banner = el("conn-banner");
  banner.hidden = view.status === "open";
  banner.textContent = view.status === "closed"
    ? "connection lost, inputs are dropped; reload to reconnect"
    : "connecting...";
}

function showReport(): void {
  if (!view.done) return;
  const box = el("done");
  box.hidden = false;
  const dl = el("done-report");
  dl.innerHTML = "";
  for (const row of reportRows(view.done)) {
    const dt = document.createElement("dt");
    dt.textContent = row.label;
    const dd = document.createElement("dd");
    dd.textContent = row.value;
    dl.appendChild(dt);
    dl.appendChild(dd);
  }
}

function loop(): void {
  const scene = replay ? replayScene() : liveScene();
  if (scene && ctx) drawFrame(ctx, vp, scene);
  if (!replay) renderHud();
  requestAnimationFrame(loop);
}

el("tech-name").textContent = technique;
updateBanner();
renderHud();
client.hello();
requestAnimationFrame(loop);
