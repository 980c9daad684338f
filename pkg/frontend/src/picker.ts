/**
 * Super-pixel picker over the server-rendered top-down raster.
 *
 * The legend maps every label to its raster color, so a click resolves
 * to a label purely client-side and unknown ids are impossible by
 * construction. Ownership is exclusive: toggling a label into one
 * object removes it from any other.
 */

import { Legend } from "./client.js";

export interface Assignment {
  name: string;
  superpixels: number[];
  color?: string;
}

export class SuperpixelPicker {
  private readonly byColor = new Map<string, number>();
  private readonly objects = new Map<string, Set<number>>();
  private readonly colors = new Map<string, string>();
  private active: string | null = null;

  constructor(private readonly legend: Legend) {
    for (const [label, color] of Object.entries(legend.colors)) {
      this.byColor.set(color.toUpperCase(), Number(label));
    }
  }

  /** Resolve a clicked raster color to its super-pixel label. */
  labelAtColor(hexColor: string): number | null {
    return this.byColor.get(hexColor.toUpperCase()) ?? null;
  }

  /** Raster pixel -> world X-Z meters, from the legend's scale. */
  pixelToWorld(px: number, py: number): [number, number] {
    const s = this.legend.px_per_meter;
    const [x0, z0] = this.legend.origin_xz;
    return [x0 + (px - 1) / s, z0 + (this.legend.height_px - 1 - py) / s];
  }

  setActiveObject(name: string, color?: string): void {
    if (!name || /\s/.test(name)) {
      throw new Error(`object name must be non-empty without whitespace: ${JSON.stringify(name)}`);
    }
    if (!this.objects.has(name)) this.objects.set(name, new Set());
    if (color !== undefined) this.colors.set(name, color);
    this.active = name;
  }

  get activeObject(): string | null {
    return this.active;
  }

  /**
   * Toggle a label in the active object's set. A label owned by another
   * object moves to the active one (exclusive ownership).
   */
  toggle(label: number): void {
    if (this.active === null) throw new Error("no active object");
    if (!this.byColor.size || !Object.hasOwn(this.legend.colors, String(label))) {
      throw new Error(`label ${label} is not in the legend`);
    }
    const mine = this.objects.get(this.active)!;
    if (mine.has(label)) {
      mine.delete(label);
      return;
    }
    for (const [name, set] of this.objects) {
      if (name !== this.active) set.delete(label);
    }
    mine.add(label);
  }

  selection(name: string): number[] {
    return [...(this.objects.get(name) ?? [])].sort((a, b) => a - b);
  }

  /** Submission is disabled until the active object has a selection. */
  canSubmit(): boolean {
    return this.active !== null && (this.objects.get(this.active)?.size ?? 0) > 0;
  }

  /** Assignments payload; empty objects are dropped, never posted. */
  buildAssignments(): Assignment[] {
    const out: Assignment[] = [];
    for (const [name, set] of this.objects) {
      if (set.size === 0) continue;
      const entry: Assignment = { name, superpixels: [...set].sort((a, b) => a - b) };
      const color = this.colors.get(name);
      if (color !== undefined) entry.color = color;
      out.push(entry);
    }
    return out;
  }
}
