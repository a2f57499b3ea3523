/* Region territory classification, mirrored from the engine.
 *
 * The server ships raw score arrays (gaze exposure means, proximity
 * channels) alongside its own classification; the client re-derives the
 * classification locally so overlays keep working from score data alone,
 * and the test suite checks the two agree region for region. All
 * comparisons are strict and operate on the exact float64 values that
 * came over the wire, so agreement is exact, not approximate.
 *
 * Region indexing is row-major from the user edge: index = iy * cols + ix.
 */

import type { Heat, PolicySettings, TechniqueName } from "./protocol.js";
import { isGazeHeat, isProximityHeat } from "./protocol.js";

export const GROUP = 0;
export const USER = 1;
export const ROBOT = 2;

export type TerritoryCode = typeof GROUP | typeof USER | typeof ROBOT;

export interface GridShape {
  rows: number;
  cols: number;
  tableW: number;
  tableH: number;
}

/** Gaze means above theta_user read as user territory, below theta_robot
 * as robot territory, anything between as group space. */
export function classifyGaze(
  means: ArrayLike<number>, params: PolicySettings,
): TerritoryCode[] {
  const tu = params.classify_theta_user;
  const tr = params.classify_theta_robot;
  const out: TerritoryCode[] = new Array(means.length);
  for (let i = 0; i < means.length; i++) {
    const m = means[i];
    // robot test last so it wins if the thresholds ever overlap
    out[i] = m < tr ? ROBOT : m > tu ? USER : GROUP;
  }
  return out;
}

/** Proximity channels: the dominant channel above its threshold wins,
 * the user channel taking exact ties; both below reads as group. */
export function classifyProximity(
  user: ArrayLike<number>, robot: ArrayLike<number>, params: PolicySettings,
): TerritoryCode[] {
  const tu = params.classify_theta_user;
  const tr = params.classify_theta_robot;
  const out: TerritoryCode[] = new Array(user.length);
  for (let i = 0; i < user.length; i++) {
    const u = user[i];
    const r = robot[i];
    out[i] = u > tu && u >= r ? USER : r > tr && r > u ? ROBOT : GROUP;
  }
  return out;
}

/** Which static band a y coordinate falls into under fixed territories. */
export function bandOwner(y: number, params: PolicySettings): TerritoryCode {
  if (y < params.band_user_max) return USER;
  if (y > params.band_robot_min) return ROBOT;
  return GROUP;
}

/** Static band classification of every region center, for the fixed
 * technique where the server sends no per-region field. */
export function classifyBands(
  grid: GridShape, params: PolicySettings,
): TerritoryCode[] {
  const tileH = grid.tableH / grid.rows;
  const out: TerritoryCode[] = new Array(grid.rows * grid.cols);
  for (let iy = 0; iy < grid.rows; iy++) {
    const owner = bandOwner((iy + 0.5) * tileH, params);
    for (let ix = 0; ix < grid.cols; ix++) {
      out[iy * grid.cols + ix] = owner;
    }
  }
  return out;
}

/** Territory array for the active technique, derived client-side.
 *
 * Field techniques classify the score arrays from the latest diff; fixed
 * territories come from the static bands; the remaining techniques have
 * no territory overlay at all.
 */
export function territoryFor(
  technique: TechniqueName, heat: Heat,
  params: PolicySettings, grid: GridShape,
): TerritoryCode[] | null {
  if (technique === "fixed") return classifyBands(grid, params);
  if (isGazeHeat(heat)) return classifyGaze(heat.gaze, params);
  if (isProximityHeat(heat)) {
    return classifyProximity(heat.user, heat.robot, params);
  }
  return null;
}

/** Peak score per region for overlay opacity, in [0, 1] given default
 * amplitudes; null for techniques without a score field. */
export function heatIntensity(heat: Heat): number[] | null {
  if (isGazeHeat(heat)) return heat.gaze.slice();
  if (isProximityHeat(heat)) {
    return heat.user.map((u, i) => Math.max(u, heat.robot[i]));
  }
  return null;
}
