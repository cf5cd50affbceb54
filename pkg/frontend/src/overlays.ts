// Provenance and sensemaking overlays: history window, trails polyline,
// activity heatmap tint, timeline strip, lineage panel with recreate.
// All data comes from server projections; the overlays only shape it for
// the renderer.

import { EngineApi } from "./api";
import { CanvasView, worldToScreen } from "./canvas";
import { DocumentStore } from "./store";
import type { EaselSpec, HistoryEntry, LineageResult, TimelineEntry, TrailPoint } from "./types";

export class HistoryOverlay {
  cursor = 0;
  window: HistoryEntry[] = [];

  constructor(
    public api: EngineApi,
    public store: DocumentStore,
  ) {}

  /** Move the slider; highlights exactly the server's <=5 item window. */
  async setCursor(cursor: number): Promise<HistoryEntry[]> {
    this.cursor = Math.max(0, cursor);
    const { window } = await this.api.history(this.store.documentId, this.cursor);
    this.window = window;
    return window;
  }

  highlightedItemIds(): string[] {
    return this.window.map((e) => e.item_id);
  }

  applyTo(view: CanvasView): void {
    view.setHighlights(new Map(this.window.map((e) => [e.item_id, "history"])));
  }
}

export class TrailsOverlay {
  path: TrailPoint[] = [];

  constructor(
    public api: EngineApi,
    public store: DocumentStore,
  ) {}

  async refresh(bucketSeconds?: number): Promise<TrailPoint[]> {
    const { path } = await this.api.trails(this.store.documentId, bucketSeconds);
    this.path = path;
    return path;
  }

  /** Screen-space polyline for the renderer. */
  screenPolyline(view: CanvasView): [number, number][] {
    return this.path.map((p) => worldToScreen(view.camera, p.x, p.y));
  }
}

export class HeatmapOverlay {
  weights: Record<string, number> = {};

  constructor(
    public api: EngineApi,
    public store: DocumentStore,
  ) {}

  async refresh(): Promise<Record<string, number>> {
    const { weights } = await this.api.heatmap(this.store.documentId);
    this.weights = weights;
    return weights;
  }

  applyTo(view: CanvasView): void {
    const tinted = new Map<string, string>();
    for (const [itemId, weight] of Object.entries(this.weights)) {
      if (weight > 0) tinted.set(itemId, `heat:${weight.toFixed(3)}`);
    }
    view.setHighlights(tinted);
  }
}

export class TimelineOverlay {
  entries: TimelineEntry[] = [];
  hovered: string | null = null;

  constructor(
    public api: EngineApi,
    public store: DocumentStore,
  ) {}

  async refresh(width: number): Promise<TimelineEntry[]> {
    const { entries } = await this.api.timeline(this.store.documentId, width);
    this.entries = entries;
    return entries;
  }

  /** Hovering an entry highlights it plus its direct parents and children. */
  hover(itemId: string | null): Set<string> {
    this.hovered = itemId;
    if (itemId === null) return new Set();
    const entry = this.entries.find((e) => e.item_id === itemId);
    if (!entry) return new Set();
    return new Set([itemId, ...entry.related.parents, ...entry.related.children]);
  }
}

export class LineagePanel {
  current: LineageResult | null = null;

  constructor(
    public api: EngineApi,
    public store: DocumentStore,
  ) {}

  async openForItem(itemId: string): Promise<LineageResult> {
    const node = this.store.nodeForItem(itemId);
    if (!node) throw new Error(`item ${itemId} has no provenance node`);
    this.current = await this.api.lineage(this.store.documentId, node.node_id);
    return this.current;
  }

  canRecreate(): boolean {
    if (!this.current) return false;
    const node = this.store.nodes.get(this.current.node_id);
    return !!node && ["generated", "quick_op", "copy"].includes(node.node_kind.type) && !!node.params_snapshot;
  }

  /** The recreate button: exact stored parameters, ready for a widget. */
  async recreateSpec(): Promise<EaselSpec> {
    if (!this.current) throw new Error("no node selected");
    const { params } = await this.api.recreate(this.store.documentId, this.current.node_id);
    const spec = params.spec;
    if (!spec) throw new Error(`node ${this.current.node_id} has no easel spec (${params.type})`);
    return spec;
  }

  async restore(nodeId: string): Promise<void> {
    const node = this.store.nodes.get(nodeId);
    if (node) await this.api.restoreItem(this.store.documentId, node.item_id);
  }
}
