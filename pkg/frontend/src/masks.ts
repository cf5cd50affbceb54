// Mask editor for reference slots: strokes accumulate locally, then the
// server rasterizes them (deterministic bytes, provenance-tracked) and the
// resulting asset id goes into the reference's mask slot.

import { EngineApi } from "./api";
import { DocumentStore } from "./store";

export interface Stroke {
  points: [number, number][];
  width: number;
  color: string;
}

export class MaskEditor {
  strokes: Stroke[] = [];
  private active: Stroke | null = null;

  constructor(
    public api: EngineApi,
    public store: DocumentStore,
    public width: number,
    public height: number,
  ) {}

  begin(x: number, y: number, brushWidth = 32): void {
    this.active = { points: [[x, y]], width: brushWidth, color: "#ffffff" };
  }

  extend(x: number, y: number): void {
    this.active?.points.push([x, y]);
  }

  end(): void {
    if (this.active) {
      this.strokes.push(this.active);
      this.active = null;
    }
  }

  clear(): void {
    this.strokes = [];
    this.active = null;
  }

  /** Rasterize server-side; returns the mask asset id for the reference. */
  async save(): Promise<string> {
    const { asset } = await this.api.sketch(
      this.store.documentId,
      this.strokes,
      { x: 0, y: 0, w: this.width, h: this.height },
      null,
      false,
    );
    return asset.asset_id;
  }
}
