/* Shared test utilities. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { TrialLog } from "../src/logfile.js";
import { parseLog } from "../src/logfile.js";

const HERE = dirname(fileURLToPath(import.meta.url));

export const FIXTURE_DIR = join(HERE, "fixtures");

export function fixtureText(name: string): string {
  return readFileSync(join(FIXTURE_DIR, name), "utf8");
}

export function loadFixture(name: string): TrialLog {
  return parseLog(fixtureText(name));
}

export const GAZE_FIXTURE = "gaze_coupled_scattered_3.jsonl";
export const PROXIMITY_FIXTURE = "proximity_decoupled_sorted_4.jsonl";
export const FIXED_FIXTURE = "fixed_coupled_scattered_5.jsonl";
