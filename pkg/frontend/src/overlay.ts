/**
 * Pure view model for the tracer canvas: turns a project state response
 * into draw primitives, so rendering backends (canvas, SVG, tests) share
 * one layout. No DOM access here.
 */

import { ProjectState, StateCorner, StateSpace } from "./client.js";
import { candidatePairs } from "./ops.js";

export interface Marker {
  x: number;
  y: number;
  label: string;
  color: string;
}

export interface Segment {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  color: string;
}

export interface SpacePolygon {
  name: string;
  points: Array<[number, number]>;
  fill: string;
  border: string;
}

export interface WallPairRow {
  edgeIndex: number;
  cornerA: number;
  cornerB: number;
  present: boolean;
}

export interface OverlayModel {
  gridLines: Array<{ kind: string; offset: number; ghost: boolean }>;
  candidateCorners: Marker[];
  selectedCorners: Marker[];
  wallSegments: Segment[];
  entranceSegments: Segment[];
  spaces: SpacePolygon[];
}

export const COLORS = {
  candidate: "#1E66F5",
  selected: "#D20F39",
  wall: "#D20F39",
  entrance: "#40A02B",
  spaceFill: "#F9E2AF",
  spaceBorder: "#1E66F5",
} as const;

function cornerIndex(corners: StateCorner[]): Map<number, StateCorner> {
  return new Map(corners.map((c) => [c.id, c]));
}

/** Build the full overlay for the current state plus in-flight selection. */
export function buildOverlay(
  state: ProjectState,
  selectedIds: readonly number[] = [],
): OverlayModel {
  const byId = cornerIndex(state.corners);
  const selected = new Set(selectedIds);

  const candidateCorners: Marker[] = state.corners
    .filter((c) => !selected.has(c.id))
    .map((c) => ({ x: c.x, y: c.y, label: String(c.id), color: COLORS.candidate }));

  const selectedCorners: Marker[] = [...selectedIds]
    .map((id) => byId.get(id))
    .filter((c): c is StateCorner => c !== undefined)
    .map((c) => ({ x: c.x, y: c.y, label: String(c.id), color: COLORS.selected }));

  const wallSegments: Segment[] = [];
  const entranceSegments: Segment[] = [];
  const spaces: SpacePolygon[] = [];

  for (const space of state.spaces) {
    const ring = space.corners
      .map((id) => byId.get(id))
      .filter((c): c is StateCorner => c !== undefined);
    if (ring.length < 3) continue;
    spaces.push({
      name: space.name,
      points: ring.map((c) => [c.x, c.y]),
      fill: COLORS.spaceFill,
      border: COLORS.spaceBorder,
    });
    for (let i = 0; i < ring.length; i++) {
      if (!space.wall_flags[i]) continue;
      const a = ring[i]!;
      const b = ring[(i + 1) % ring.length]!;
      wallSegments.push({ x1: a.x, y1: a.y, x2: b.x, y2: b.y, color: COLORS.wall });
    }
    for (const ent of space.entrances) {
      const pts = ent.endpoints
        .map((id) => [...state.entrance_corners, ...state.corners].find((c) => c.id === id))
        .filter((c): c is StateCorner => c !== undefined);
      if (pts.length === 2) {
        entranceSegments.push({
          x1: pts[0]!.x,
          y1: pts[0]!.y,
          x2: pts[1]!.x,
          y2: pts[1]!.y,
          color: COLORS.entrance,
        });
      }
    }
  }

  return {
    gridLines: state.lines.map((l) => ({ kind: l.kind, offset: l.offset, ghost: l.ghost })),
    candidateCorners,
    selectedCorners,
    wallSegments,
    entranceSegments,
    spaces,
  };
}

/** Candidate wall-pair panel rows for the in-progress selection. */
export function wallPairPanel(
  selectedIds: readonly number[],
  flags: readonly boolean[] = [],
): WallPairRow[] {
  if (selectedIds.length < 3) return [];
  return candidatePairs([...selectedIds]).map(([a, b], i) => ({
    edgeIndex: i + 1,
    cornerA: a,
    cornerB: b,
    present: flags[i] ?? false,
  }));
}

export { StateSpace };
