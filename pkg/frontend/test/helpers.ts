import { execFileSync } from "node:child_process";
import { readFileSync } from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { TracerSession } from "../src/session.js";

export const REPO_ROOT = path.resolve(
  path.dirname(fileURLToPath(import.meta.url)),
  "..",
  "..",
);
export const FIXTURE_SCRIPT = path.join(REPO_ROOT, "tests", "data", "four_rooms.script");
export const FIXTURE_ANCHORS = path.join(REPO_ROOT, "tests", "data", "four_rooms.anchors");

export function fixtureScriptText(): string {
  return readFileSync(FIXTURE_SCRIPT, "utf-8");
}

export function fixtureAnchorsText(): string {
  return readFileSync(FIXTURE_ANCHORS, "utf-8");
}

/** Op lines of a script (comments and blanks are not ops). */
export function opLines(script: string): string[] {
  return script
    .split("\n")
    .map((l) => l.trim())
    .filter((l) => l !== "" && !l.startsWith("#"));
}

export function python(args: string[], input?: string): string {
  return execFileSync("python3", args, {
    encoding: "utf-8",
    input,
    cwd: REPO_ROOT,
  });
}

export function simkitCli(args: string[]): string {
  return execFileSync("simkit", args, { encoding: "utf-8", cwd: REPO_ROOT });
}

/**
 * Drive the four-room fixture as a UI session: every fixture op as the
 * gesture a user would make on the canvas.
 */
export function fourRoomSession(): TracerSession {
  const s = new TracerSession();
  for (const offset of [100, 200, 300]) s.shiftClickLine("horizontal", offset);
  for (const offset of [100, 300, 500]) s.shiftClickLine("vertical", offset);
  s.computeCornersButton();

  const rooms: Array<{ name: string; ring: number[]; entrance?: number[] }> = [
    { name: "101", ring: [1, 2, 5, 4], entrance: [1, 150, 100, 180, 100] },
    { name: "102", ring: [2, 3, 6, 5] },
    { name: "103", ring: [4, 5, 8, 7] },
    { name: "104", ring: [5, 6, 9, 8] },
  ];
  for (const room of rooms) {
    s.beginSpace();
    for (const id of room.ring) s.clickCorner(id);
    for (let edge = 1; edge <= room.ring.length; edge++) s.clickWallPair(edge);
    if (room.entrance) {
      const [w, x1, y1, x2, y2] = room.entrance as [number, number, number, number, number];
      s.shiftClickEntrance(w, x1, y1, x2, y2);
    }
    s.finalizeSpaceForm(room.name, "room");
  }
  return s;
}
