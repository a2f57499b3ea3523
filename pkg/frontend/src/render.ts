/* Top-down board rendering.
 *
 * Draw order: felt, territory overlay, region grid, goal structures,
 * blocks with their voice labels, robot base and reach segment, the
 * user cursor, then the gaze marker. The overlay paints user regions
 * red, robot regions green and group space white, with opacity scaled
 * by the region's score so a heatmap reads through the classification.
 *
 * The drawing context is a structural subset of CanvasRenderingContext2D
 * so the suite can drive the renderer with a recording stub.
 */

import type { Point } from "./protocol.js";
import { GROUP, ROBOT, USER } from "./territory.js";

export interface Draw2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
  font: string;
  textAlign: CanvasTextAlign;
  textBaseline: CanvasTextBaseline;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface Viewport {
  width: number;        // canvas pixels
  height: number;
  margin: number;
  tableW: number;       // table meters
  tableH: number;
}

/* Everything one frame needs, shared by live diffs and replay frames. */
export interface Scene {
  gridRows: number;
  gridCols: number;
  blocks: {
    id: number;
    color: "yellow" | "black";
    label: number;
    p: Point;
    state: "on_table" | "held" | "placed";
    assignment: "unassigned" | "robot" | "user";
  }[];
  structures: { id: number; base: Point; slots: string[]; filled: number }[];
  user: Point;
  robot: Point;
  robotBase: Point;
  territory: ArrayLike<number> | null;
  intensity: ArrayLike<number> | null;
  gaze: Point | null;
}

export const TERRITORY_FILL: Record<number, string> = {
  [GROUP]: "#ffffff",
  [USER]: "#d64541",
  [ROBOT]: "#2f9e44",
};

/* The user stands at y=0, drawn at the bottom edge of the canvas. */
export function toScreen(vp: Viewport, x: number, y: number): Point {
  const sx = vp.margin + (x / vp.tableW) * (vp.width - 2 * vp.margin);
  const sy = vp.margin + (1 - y / vp.tableH) * (vp.height - 2 * vp.margin);
  return [sx, sy];
}

export function toTable(vp: Viewport, sx: number, sy: number): Point {
  const x = ((sx - vp.margin) / (vp.width - 2 * vp.margin)) * vp.tableW;
  const y = (1 - (sy - vp.margin) / (vp.height - 2 * vp.margin)) * vp.tableH;
  return [clamp(x, 0, vp.tableW), clamp(y, 0, vp.tableH)];
}

function clamp(v: number, lo: number, hi: number): number {
  return v < lo ? lo : v > hi ? hi : v;
}

/** Overlay opacity for one region. Group space stays fully transparent
 * white; owned regions fade in with their score, never below a floor
 * that keeps the classification readable. */
export function overlayAlpha(code: number, intensity: number | null): number {
  if (code === GROUP) return 0;
  if (intensity === null) return 0.35;
  return 0.2 + 0.5 * clamp(intensity, 0, 1);
}

export function drawFrame(ctx: Draw2D, vp: Viewport, scene: Scene): void {
  ctx.globalAlpha = 1;
  ctx.clearRect(0, 0, vp.width, vp.height);
  ctx.fillStyle = "#f4efe6";
  ctx.fillRect(0, 0, vp.width, vp.height);

  drawTerritory(ctx, vp, scene);
  drawGrid(ctx, vp, scene);
  for (const s of scene.structures) drawStructure(ctx, vp, s);
  // held blocks track their holder's position, so everything draws at p
  for (const b of scene.blocks) drawBlock(ctx, vp, b);
  drawRobot(ctx, vp, scene);
  drawUser(ctx, vp, scene);
  if (scene.gaze) drawGaze(ctx, vp, scene.gaze);
  ctx.globalAlpha = 1;
}

function drawTerritory(ctx: Draw2D, vp: Viewport, scene: Scene): void {
  if (scene.territory === null) return;
  const tw = (vp.width - 2 * vp.margin) / scene.gridCols;
  const th = (vp.height - 2 * vp.margin) / scene.gridRows;
  for (let iy = 0; iy < scene.gridRows; iy++) {
    for (let ix = 0; ix < scene.gridCols; ix++) {
      const idx = iy * scene.gridCols + ix;
      const code = scene.territory[idx];
      const alpha = overlayAlpha(
        code, scene.intensity === null ? null : scene.intensity[idx]);
      if (alpha <= 0) continue;
      ctx.globalAlpha = alpha;
      ctx.fillStyle = TERRITORY_FILL[code] ?? TERRITORY_FILL[GROUP];
      // region row iy sits iy tiles up from the bottom edge
      const x = vp.margin + ix * tw;
      const y = vp.height - vp.margin - (iy + 1) * th;
      ctx.fillRect(x, y, tw, th);
    }
  }
  ctx.globalAlpha = 1;
}

function drawGrid(ctx: Draw2D, vp: Viewport, scene: Scene): void {
  ctx.strokeStyle = "#d8d2c4";
  ctx.lineWidth = 1;
  const w = vp.width - 2 * vp.margin;
  const h = vp.height - 2 * vp.margin;
  for (let ix = 0; ix <= scene.gridCols; ix++) {
    const x = vp.margin + (ix * w) / scene.gridCols;
    ctx.beginPath();
    ctx.moveTo(x, vp.margin);
    ctx.lineTo(x, vp.margin + h);
    ctx.stroke();
  }
  for (let iy = 0; iy <= scene.gridRows; iy++) {
    const y = vp.margin + (iy * h) / scene.gridRows;
    ctx.beginPath();
    ctx.moveTo(vp.margin, y);
    ctx.lineTo(vp.margin + w, y);
    ctx.stroke();
  }
}

function drawStructure(
  ctx: Draw2D, vp: Viewport,
  s: { base: Point; slots: string[]; filled: number },
): void {
  const [sx, sy] = toScreen(vp, s.base[0], s.base[1]);
  const size = 30;
  const slotH = 9;
  ctx.strokeStyle = "#7a7264";
  ctx.lineWidth = 2;
  ctx.strokeRect(sx - size / 2, sy - size / 2, size, size);
  // slot stack grows upward; filled slots show their required color
  for (let i = 0; i < s.slots.length; i++) {
    const y = sy + size / 2 - (i + 1) * slotH;
    if (i < s.filled) {
      ctx.fillStyle = s.slots[i] === "yellow" ? "#f5c518" : "#333333";
      ctx.fillRect(sx - size / 2 + 2, y, size - 4, slotH - 2);
    } else {
      ctx.strokeStyle = s.slots[i] === "yellow" ? "#c9a227" : "#555555";
      ctx.lineWidth = 1;
      ctx.strokeRect(sx - size / 2 + 2, y, size - 4, slotH - 2);
    }
  }
}

function drawBlock(
  ctx: Draw2D, vp: Viewport,
  b: Scene["blocks"][number],
): void {
  const [sx, sy] = toScreen(vp, b.p[0], b.p[1]);
  const r = b.state === "placed" ? 7 : 11;
  ctx.beginPath();
  ctx.arc(sx, sy, r, 0, Math.PI * 2);
  ctx.fillStyle = b.color === "yellow" ? "#f5c518" : "#333333";
  ctx.fill();
  if (b.assignment !== "unassigned") {
    ctx.strokeStyle = b.assignment === "robot" ? "#2f9e44" : "#d64541";
    ctx.lineWidth = 2.5;
    ctx.stroke();
  }
  if (b.state !== "placed") {
    ctx.fillStyle = b.color === "yellow" ? "#5f4b00" : "#f0f0f0";
    ctx.font = "10px sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(String(b.label), sx, sy);
  }
}

function drawRobot(ctx: Draw2D, vp: Viewport, scene: Scene): void {
  const [bx, by] = toScreen(vp, scene.robotBase[0], scene.robotBase[1]);
  const [gx, gy] = toScreen(vp, scene.robot[0], scene.robot[1]);
  ctx.strokeStyle = "#4a5568";
  ctx.lineWidth = 5;
  ctx.beginPath();
  ctx.moveTo(bx, by);
  ctx.lineTo(gx, gy);
  ctx.stroke();
  ctx.fillStyle = "#4a5568";
  ctx.beginPath();
  ctx.arc(bx, by, 12, 0, Math.PI * 2);
  ctx.fill();
  ctx.beginPath();
  ctx.arc(gx, gy, 6, 0, Math.PI * 2);
  ctx.fill();
}

function drawUser(ctx: Draw2D, vp: Viewport, scene: Scene): void {
  const [sx, sy] = toScreen(vp, scene.user[0], scene.user[1]);
  ctx.strokeStyle = "#1c5d99";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.arc(sx, sy, 9, 0, Math.PI * 2);
  ctx.stroke();
}

function drawGaze(ctx: Draw2D, vp: Viewport, gaze: Point): void {
  const [sx, sy] = toScreen(vp, gaze[0], gaze[1]);
  ctx.strokeStyle = "#8854d0";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.arc(sx, sy, 14, 0, Math.PI * 2);
  ctx.stroke();
}
