/* Pointer and keyboard capture, translated into session inputs.
 *
 * The mapping is per technique. Every technique drags blocks with the
 * pointer (grab, streamed moves, release); the menu technique starts a
 * press-and-hold instead and only converts to a drag once the pointer
 * travels, so a still hold of menu_dwell_s opens the option menu; the
 * voice technique collects typed digits and fires on enter; the gaze
 * technique streams the cursor position at tick cadence as the user's
 * point of attention.
 *
 * All decisions about outcomes stay server-side. The client never
 * guesses whether a flick was a gesture or a release landed in a band;
 * it only reports what the user did, when.
 */

import type { InputPayload, MenuChoiceName, TechniqueName } from "./protocol.js";

export interface ControlOptions {
  technique: TechniqueName;
  menuDwellS: number;
  send(p: InputPayload): void;
  /** Monotonic clock in seconds; injectable for tests. */
  now?(): number;
  onMenuOpen?(block: number): void;
  onMenuClose?(): void;
}

/* Pointer travel below this (table meters) still counts as a hold. */
const DRAG_SLOP = 0.01;

export class TechniqueControls {
  readonly technique: TechniqueName;

  private readonly send: (p: InputPayload) => void;
  private menuDwellS: number;
  private readonly now: () => number;
  private readonly onMenuOpen?: (block: number) => void;
  private readonly onMenuClose?: () => void;

  private cursor: { x: number; y: number } | null = null;
  private cursorDirty = false;
  private dragging = false;
  private dwell: { block: number; at: number; x: number; y: number } | null = null;
  private menuOpen = false;
  private voiceBuffer = "";

  constructor(opts: ControlOptions) {
    this.technique = opts.technique;
    this.menuDwellS = opts.menuDwellS;
    this.send = opts.send;
    this.now = opts.now ?? (() => Date.now() / 1000);
    this.onMenuOpen = opts.onMenuOpen;
    this.onMenuClose = opts.onMenuClose;
  }

  get isDragging(): boolean {
    return this.dragging;
  }

  /** Adopt the trial's configured dwell once the setup diff arrives. */
  setMenuDwell(seconds: number): void {
    this.menuDwellS = seconds;
  }

  get isMenuOpen(): boolean {
    return this.menuOpen;
  }

  get voiceDraft(): string {
    return this.voiceBuffer;
  }

  /** Pointer pressed at table coordinates, over blockId if any. */
  pointerDown(x: number, y: number, blockId: number | null): void {
    this.cursor = { x, y };
    if (blockId === null || this.dragging || this.dwell !== null) return;
    if (this.technique === "menu") {
      this.dwell = { block: blockId, at: this.now(), x, y };
      this.send({ kind: "dwell_start", block: blockId });
      return;
    }
    this.dragging = true;
    this.send({ kind: "grab", block: blockId });
  }

  pointerMove(x: number, y: number): void {
    this.cursor = { x, y };
    this.cursorDirty = true;
    if (this.dwell !== null && !this.menuOpen) {
      // travel converts the hold into an ordinary drag
      const d = Math.hypot(x - this.dwell.x, y - this.dwell.y);
      if (d > DRAG_SLOP) {
        const block = this.dwell.block;
        this.dwell = null;
        this.send({ kind: "menu_choice", choice: "cancel" });
        this.dragging = true;
        this.send({ kind: "grab", block });
      }
    }
  }

  pointerUp(x: number, y: number): void {
    this.cursor = { x, y };
    if (this.dragging) {
      this.dragging = false;
      this.send({ kind: "release", x, y });
      return;
    }
    if (this.dwell !== null && !this.menuOpen) {
      // released before the menu opened: a too-short hold cancels
      this.dwell = null;
      this.send({ kind: "menu_choice", choice: "cancel" });
    }
    // with the menu open the press ends silently; the option click decides
  }

  /** Option clicked in the on-screen menu. */
  menuSelect(choice: MenuChoiceName): void {
    if (this.dwell === null) return;
    this.dwell = null;
    this.menuOpen = false;
    this.send({ kind: "menu_choice", choice });
    this.onMenuClose?.();
  }

  /** Digit typed toward a voice label. */
  keyDigit(d: string): void {
    if (this.technique !== "voice" || !/^[0-9]$/.test(d)) return;
    this.voiceBuffer += d;
  }

  keyEnter(): void {
    if (this.technique !== "voice" || this.voiceBuffer === "") return;
    const label = parseInt(this.voiceBuffer, 10);
    this.voiceBuffer = "";
    this.send({ kind: "voice", label });
  }

  keyBackspace(): void {
    this.voiceBuffer = this.voiceBuffer.slice(0, -1);
  }

  /** Tick-cadence pulse: streams drag moves and gaze, opens a ripe menu.
   * Call this every sim tick (the pace the server consumes inputs at). */
  tickPulse(): void {
    if (this.dwell !== null && !this.menuOpen &&
        this.now() - this.dwell.at >= this.menuDwellS) {
      this.menuOpen = true;
      this.onMenuOpen?.(this.dwell.block);
    }
    if (this.cursor === null) return;
    if (this.dragging && this.cursorDirty) {
      this.send({ kind: "move", x: this.cursor.x, y: this.cursor.y });
      this.cursorDirty = false;
    }
    if (this.technique === "gaze") {
      this.send({ kind: "gaze", x: this.cursor.x, y: this.cursor.y });
    }
  }
}
