// Collections (project-wide saved asset sets) and the Exhibit gallery.

import { EngineApi } from "./api";
import { DocumentStore } from "./store";
import type { CanvasItem, Collection, ExhibitEntry } from "./types";

export class CollectionsPanel {
  constructor(
    public api: EngineApi,
    public store: DocumentStore,
  ) {}

  list(): Collection[] {
    return [...this.store.collections.values()].sort((a, b) => a.created_at - b.created_at);
  }

  async save(name: string, assetIds: string[], tags: string[] = []): Promise<Collection> {
    return this.api.createCollection(this.store.documentId, name, assetIds, tags);
  }

  async addTo(collectionId: string, assetId: string): Promise<Collection> {
    return this.api.addToCollection(this.store.documentId, collectionId, assetId);
  }

  /** Pull a copy onto the current page; the server records the copy node. */
  async pull(collectionId: string, assetId: string, pageId: string, at: [number, number]): Promise<CanvasItem> {
    return this.api.instantiateFromCollection(this.store.documentId, collectionId, assetId, pageId, at);
  }
}

export class ExhibitPanel {
  constructor(
    public api: EngineApi,
    public store: DocumentStore,
  ) {}

  entries(): ExhibitEntry[] {
    return [...this.store.exhibit];
  }

  async add(assetId: string, caption = ""): Promise<ExhibitEntry> {
    return this.api.exhibitAdd(this.store.documentId, assetId, caption);
  }

  async reorder(entryId: string, index: number): Promise<ExhibitEntry> {
    return this.api.exhibitUpdate(this.store.documentId, entryId, { index });
  }

  async caption(entryId: string, caption: string): Promise<ExhibitEntry> {
    return this.api.exhibitUpdate(this.store.documentId, entryId, { caption });
  }
}
