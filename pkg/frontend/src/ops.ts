/**
 * Op-script vocabulary shared with the tracing engine. One op per line,
 * whitespace-delimited; this module only formats — validation happens
 * server-side where the authoritative model lives.
 */

export type LineKind = "horizontal" | "vertical";
export type SpaceKind =
  | "room"
  | "corridor"
  | "restroom"
  | "staircase"
  | "elevator";

/** Plain decimal formatting; integers stay integers. */
export function num(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`non-finite coordinate ${v}`);
  return String(v);
}

export const ops = {
  addLine(kind: LineKind, offset: number, ghost = false): string {
    return `add_line ${kind} ${num(offset)}${ghost ? " ghost" : ""}`;
  },
  addObliqueLine(
    angleDeg: number,
    anchorX: number,
    anchorY: number,
    ghost = false,
  ): string {
    return `add_line oblique ${num(angleDeg)} ${num(anchorX)} ${num(anchorY)}${ghost ? " ghost" : ""}`;
  },
  removeLine(x: number, y: number): string {
    return `remove_line ${num(x)} ${num(y)}`;
  },
  computeCorners(): string {
    return "compute_corners";
  },
  beginSpace(ordered = false): string {
    return ordered ? "begin_space ordered" : "begin_space";
  },
  pickCorner(id: number): string {
    return `pick_corner ${id}`;
  },
  setWall(edgeIndex: number, present: boolean): string {
    return `set_wall ${edgeIndex} ${present ? "on" : "off"}`;
  },
  addEntrance(
    wallIndex: number,
    x1: number,
    y1: number,
    x2: number,
    y2: number,
  ): string {
    return `add_entrance ${wallIndex} ${num(x1)} ${num(y1)} ${num(x2)} ${num(y2)}`;
  },
  finalizeSpace(name: string, kind: SpaceKind): string {
    if (!name || /\s/.test(name)) {
      throw new Error(`space name must be non-empty without whitespace: ${JSON.stringify(name)}`);
    }
    return `finalize_space ${name} ${kind}`;
  },
};

/** Adjacent ring pairs, mirroring the engine's candidate wall listing. */
export function candidatePairs(ring: number[]): Array<[number, number]> {
  return ring.map((id, i) => [id, ring[(i + 1) % ring.length]!] as [number, number]);
}
