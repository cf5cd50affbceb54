// Infinite-canvas view model: pan/zoom transform, z-ordered display list
// with emphasis rendered as opacity, hit testing, selection. Rendering
// backends (DOM, canvas2d) consume the display list; all state mutations
// go through the API so the server stays authoritative.

import { EngineApi } from "./api";
import { DocumentStore } from "./store";
import type { CanvasItem } from "./types";

export interface Camera {
  x: number; // world coordinate at the viewport's left edge
  y: number;
  zoom: number;
}

export interface DisplayEntry {
  item: CanvasItem;
  screen: { x: number; y: number; w: number; h: number };
  opacity: number;
  selected: boolean;
  highlight: string | null; // overlay tint tag, e.g. "history" or "heat:0.6"
}

export function worldToScreen(camera: Camera, x: number, y: number): [number, number] {
  return [(x - camera.x) * camera.zoom, (y - camera.y) * camera.zoom];
}

export function screenToWorld(camera: Camera, sx: number, sy: number): [number, number] {
  return [sx / camera.zoom + camera.x, sy / camera.zoom + camera.y];
}

export class CanvasView {
  camera: Camera = { x: 0, y: 0, zoom: 1 };
  pageId: string;
  selection = new Set<string>();
  highlights = new Map<string, string>();

  constructor(
    public store: DocumentStore,
    public api: EngineApi,
    pageId?: string,
  ) {
    this.pageId = pageId ?? store.firstPage().page_id;
  }

  pan(dx: number, dy: number): void {
    this.camera.x += dx / this.camera.zoom;
    this.camera.y += dy / this.camera.zoom;
  }

  zoomAt(sx: number, sy: number, factor: number): void {
    const [wx, wy] = screenToWorld(this.camera, sx, sy);
    this.camera.zoom = Math.min(16, Math.max(1 / 16, this.camera.zoom * factor));
    // keep the anchor point stationary on screen
    this.camera.x = wx - sx / this.camera.zoom;
    this.camera.y = wy - sy / this.camera.zoom;
  }

  displayList(): DisplayEntry[] {
    return this.store.itemsOnPage(this.pageId).map((item) => {
      const [sx, sy] = worldToScreen(this.camera, item.position[0], item.position[1]);
      return {
        item,
        screen: { x: sx, y: sy, w: item.size[0] * this.camera.zoom, h: item.size[1] * this.camera.zoom },
        opacity: item.emphasis,
        selected: this.selection.has(item.item_id),
        highlight: this.highlights.get(item.item_id) ?? null,
      };
    });
  }

  hitTest(sx: number, sy: number): CanvasItem | null {
    const [wx, wy] = screenToWorld(this.camera, sx, sy);
    const items = this.store.itemsOnPage(this.pageId);
    for (let i = items.length - 1; i >= 0; i--) {
      const it = items[i];
      if (
        wx >= it.position[0] &&
        wx <= it.position[0] + it.size[0] &&
        wy >= it.position[1] &&
        wy <= it.position[1] + it.size[1]
      ) {
        return it;
      }
    }
    return null;
  }

  async select(itemId: string): Promise<void> {
    this.selection = new Set([itemId]);
    await this.api.touchItem(this.store.documentId, itemId); // clicks feed activity
  }

  clearSelection(): void {
    this.selection.clear();
  }

  async moveSelected(dx: number, dy: number): Promise<void> {
    for (const itemId of this.selection) {
      const item = this.store.items.get(itemId);
      if (!item) continue;
      await this.api.moveItem(this.store.documentId, itemId, [item.position[0] + dx, item.position[1] + dy]);
    }
  }

  async dropFiles(files: { name: string; bytes: ArrayBuffer; mime: string }[], at: [number, number]): Promise<void> {
    let [x, y] = at;
    for (const file of files) {
      const kind = kindForMime(file.mime, file.name);
      const asset = await this.api.ingest(this.store.documentId, file.bytes, kind);
      const size: [number, number] = asset.dims
        ? [Math.min(512, asset.dims[0]), Math.min(512, (asset.dims[1] * Math.min(512, asset.dims[0])) / asset.dims[0])]
        : [256, 256];
      await this.api.placeItem(this.store.documentId, asset.asset_id, this.pageId, [x, y], size);
      x += size[0] + 24;
    }
  }

  setHighlights(tagged: Map<string, string>): void {
    this.highlights = tagged;
  }
}

export function kindForMime(mime: string, name: string): string {
  if (mime.startsWith("image/")) return "image";
  if (mime.startsWith("video/")) return "video";
  if (mime.startsWith("audio/")) return "audio";
  if (mime.startsWith("text/")) return "text";
  if (name.endsWith(".glb")) return "model3d";
  return "image";
}
