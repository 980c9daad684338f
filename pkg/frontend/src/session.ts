/**
 * Gesture-to-op state machine for the canvas tracer.
 *
 * Each user gesture enqueues exactly one op; the session holds no
 * authoritative geometry (the service's state response is the source of
 * truth for rendering). Ops are drained in batches for posting and the
 * full transcript doubles as a replayable script.
 */

import { LineKind, SpaceKind, ops } from "./ops.js";

export class TracerSession {
  private transcript: string[] = [];
  private pending: string[] = [];
  private inSpace = false;
  private picked: number[] = [];

  private push(op: string): void {
    this.transcript.push(op);
    this.pending.push(op);
  }

  /** Shift-click on the canvas with the line tool: add a grid line. */
  shiftClickLine(kind: LineKind, offset: number, ghost = false): void {
    this.push(ops.addLine(kind, offset, ghost));
  }

  /** Shift-click with the oblique tool (angle from the gesture drag). */
  shiftClickObliqueLine(
    angleDeg: number,
    anchorX: number,
    anchorY: number,
    ghost = false,
  ): void {
    this.push(ops.addObliqueLine(angleDeg, anchorX, anchorY, ghost));
  }

  /** Alt/Cmd-click near a line: remove it. */
  altClickRemoveLine(x: number, y: number): void {
    this.push(ops.removeLine(x, y));
  }

  /** The "Compute Corners" button. */
  computeCornersButton(): void {
    this.push(ops.computeCorners());
  }

  /** Start a new space; discards any unfinished one (engine does too). */
  beginSpace(ordered = false): void {
    this.inSpace = true;
    this.picked = [];
    this.push(ops.beginSpace(ordered));
  }

  /** Click a candidate (blue) corner: select it for the current space. */
  clickCorner(id: number): void {
    this.requireSpace();
    if (this.picked.includes(id)) {
      throw new Error(`corner ${id} is already selected`);
    }
    this.picked.push(id);
    this.push(ops.pickCorner(id));
  }

  /** Click a listed corner pair in the panel: toggle its wall. */
  clickWallPair(edgeIndex: number, present = true): void {
    this.requireSpace();
    if (this.picked.length < 3) {
      throw new Error("select at least 3 corners before placing walls");
    }
    this.push(ops.setWall(edgeIndex, present));
  }

  /** Shift-click twice on a wall segment: place an entrance. */
  shiftClickEntrance(
    wallIndex: number,
    x1: number,
    y1: number,
    x2: number,
    y2: number,
  ): void {
    this.requireSpace();
    this.push(ops.addEntrance(wallIndex, x1, y1, x2, y2));
  }

  /** Submit the name/type form: finalize the space. */
  finalizeSpaceForm(name: string, kind: SpaceKind): void {
    this.requireSpace();
    if (this.picked.length < 3) {
      throw new Error("a space needs at least 3 corners");
    }
    this.push(ops.finalizeSpace(name, kind));
    this.inSpace = false;
    this.picked = [];
  }

  get selectedCorners(): readonly number[] {
    return this.picked;
  }

  get spaceInProgress(): boolean {
    return this.inSpace;
  }

  /** Ops queued since the last drain (for the next batch post). */
  drainPending(): string[] {
    const out = this.pending;
    this.pending = [];
    return out;
  }

  /** Re-queue ops whose batch failed, ahead of anything enqueued since. */
  requeue(ops_: string[]): void {
    this.pending = [...ops_, ...this.pending];
  }

  /** The whole session as a replayable script. */
  script(): string {
    return this.transcript.join("\n") + (this.transcript.length ? "\n" : "");
  }

  private requireSpace(): void {
    if (!this.inSpace) throw new Error("no space in progress (begin one first)");
  }
}
