// Client-side mirror of one server document. The server journal is the
// source of truth: the store loads a snapshot, then applies the mutation
// records pushed on the document event stream. Reducers mirror the
// server's apply handlers; an unknown op forces a full resync.

import { EngineApi } from "./api";
import type {
  Asset,
  CanvasItem,
  Collection,
  DocumentState,
  Easel,
  ExhibitEntry,
  MutationRecord,
  Page,
  ProvenanceNode,
  Run,
} from "./types";

export type StoreListener = (store: DocumentStore) => void;

export class DocumentStore {
  seq = 0;
  name = "";
  pages = new Map<string, Page>();
  assets = new Map<string, Asset>();
  items = new Map<string, CanvasItem>();
  nodes = new Map<string, ProvenanceNode>();
  easels = new Map<string, Easel>();
  runs = new Map<string, Run>();
  collections = new Map<string, Collection>();
  exhibit: ExhibitEntry[] = [];

  private listeners = new Set<StoreListener>();
  private abort: AbortController | null = null;

  constructor(
    public api: EngineApi,
    public documentId: string,
  ) {}

  onChange(listener: StoreListener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this);
  }

  async load(): Promise<void> {
    this.applySnapshot(await this.api.documentState(this.documentId));
    this.emit();
  }

  applySnapshot(state: DocumentState): void {
    this.seq = state.seq;
    this.name = state.name;
    this.pages = new Map(state.pages.map((p) => [p.page_id, p]));
    this.assets = new Map(state.assets.map((a) => [a.asset_id, a]));
    this.items = new Map(state.items.map((i) => [i.item_id, i]));
    this.nodes = new Map(state.nodes.map((n) => [n.node_id, n]));
    this.easels = new Map(state.easels.map((e) => [e.easel_id, e]));
    this.runs = new Map(state.runs.map((r) => [r.run_id, r]));
    this.collections = new Map(state.collections.map((c) => [c.collection_id, c]));
    this.exhibit = [...state.exhibit];
  }

  /** Follow the server event stream until the controller aborts. */
  async follow(): Promise<void> {
    this.abort?.abort();
    this.abort = new AbortController();
    const signal = this.abort.signal;
    try {
      for await (const record of this.api.documentEvents(this.documentId, signal)) {
        await this.apply(record);
      }
    } catch (err) {
      if (!signal.aborted) throw err;
    }
  }

  stop(): void {
    this.abort?.abort();
    this.abort = null;
  }

  async apply(record: MutationRecord): Promise<void> {
    if (record.seq <= this.seq) return; // already in the snapshot
    if (record.seq > this.seq + 1) {
      // missed records (subscription raced the snapshot, or the server
      // dropped a slow consumer): resync from a fresh snapshot
      await this.load();
      return;
    }
    const d = record.data as Record<string, any>;
    switch (record.op) {
      case "create_page":
        this.pages.set(d.page_id, { page_id: d.page_id, name: d.name, created_at: d.ts });
        break;
      case "ingest_asset":
        this.assets.set(d.asset_id, {
          asset_id: d.asset_id,
          kind: d.kind,
          blob: d.blob,
          created_at: d.ts,
          dims: d.dims ?? null,
          duration: d.duration ?? null,
          caption: d.caption ?? null,
          control_maps: {},
          origin: d.origin ?? { type: "imported" },
        });
        break;
      case "place_item":
        this.items.set(d.item_id, {
          item_id: d.item_id,
          page_id: d.page_id,
          asset_id: d.asset_id,
          position: d.position,
          size: d.size,
          z_order: d.z_order,
          created_at: d.ts,
          emphasis: 1,
          click_count: 0,
          last_interaction_at: d.ts,
          deleted: false,
        });
        this.nodes.set(d.node.node_id, {
          node_id: d.node.node_id,
          item_id: d.item_id,
          asset_id: d.asset_id,
          node_kind: d.node.node_kind,
          created_at: d.ts,
          parents: d.node.parents,
          params_snapshot: d.node.params_snapshot,
          deleted: false,
          last_interaction_at: d.ts,
          click_count: 0,
        });
        break;
      case "move_item": {
        const item = this.items.get(d.item_id);
        if (item) {
          item.position = d.position;
          item.size = d.size;
        }
        break;
      }
      case "touch_item": {
        const item = this.items.get(d.item_id);
        if (item) {
          item.click_count += 1;
          item.last_interaction_at = Math.max(item.last_interaction_at, d.ts);
          const node = [...this.nodes.values()].find((n) => n.item_id === item.item_id);
          if (node) {
            node.click_count = item.click_count;
            node.last_interaction_at = item.last_interaction_at;
          }
        }
        break;
      }
      case "set_emphasis": {
        const item = this.items.get(d.item_id);
        if (item) item.emphasis = d.level;
        break;
      }
      case "set_deleted": {
        const node = this.nodes.get(d.node_id);
        if (node) {
          node.deleted = d.deleted;
          const item = this.items.get(node.item_id);
          if (item) item.deleted = d.deleted;
        }
        break;
      }
      case "create_easel":
        this.easels.set(d.easel_id, {
          easel_id: d.easel_id,
          page_id: d.page_id,
          position: d.position,
          created_at: d.ts,
          spec: d.spec,
        });
        break;
      case "update_easel": {
        const easel = this.easels.get(d.easel_id);
        if (easel) easel.spec = d.spec;
        break;
      }
      case "record_run":
        this.runs.set(d.run_id, {
          run_id: d.run_id,
          params: d.params,
          graph_blob: d.graph_blob,
          graph_hash: d.graph_hash,
          submitted_at: d.ts,
          output_node_ids: [],
        });
        break;
      case "record_generation": {
        for (const out of d.outputs) {
          this.items.set(out.item_id, {
            item_id: out.item_id,
            page_id: out.page_id,
            asset_id: out.asset_id,
            position: out.position,
            size: out.size,
            z_order: out.z_order,
            created_at: d.ts,
            emphasis: 1,
            click_count: 0,
            last_interaction_at: d.ts,
            deleted: false,
          });
          this.nodes.set(out.node_id, {
            node_id: out.node_id,
            item_id: out.item_id,
            asset_id: out.asset_id,
            node_kind: { type: d.node_type, run_id: d.run_id },
            created_at: d.ts,
            parents: d.parents,
            params_snapshot: d.params,
            deleted: false,
            last_interaction_at: d.ts,
            click_count: 0,
          });
        }
        const run = this.runs.get(d.run_id);
        if (run) run.output_node_ids = d.outputs.map((o: any) => o.node_id);
        break;
      }
      case "set_metadata": {
        const asset = this.assets.get(d.asset_id);
        if (asset) {
          if (d.caption !== null) asset.caption = d.caption;
          Object.assign(asset.control_maps, d.control_maps);
        }
        break;
      }
      case "create_collection":
        this.collections.set(d.collection_id, {
          collection_id: d.collection_id,
          name: d.name,
          created_at: d.ts,
          tags: d.tags,
          members: d.members,
        });
        break;
      case "add_to_collection": {
        const coll = this.collections.get(d.collection_id);
        if (coll && !coll.members.includes(d.asset_id)) coll.members.push(d.asset_id);
        break;
      }
      case "apply_layout":
        for (const [itemId, position] of d.moves) {
          const item = this.items.get(itemId);
          if (item) item.position = position;
        }
        break;
      case "exhibit_add":
        this.exhibit.push({ entry_id: d.entry_id, asset_id: d.asset_id, created_at: d.ts, caption: d.caption });
        break;
      case "exhibit_reorder": {
        const idx = this.exhibit.findIndex((e) => e.entry_id === d.entry_id);
        if (idx >= 0) {
          const [entry] = this.exhibit.splice(idx, 1);
          this.exhibit.splice(d.index, 0, entry);
        }
        break;
      }
      case "exhibit_caption": {
        const entry = this.exhibit.find((e) => e.entry_id === d.entry_id);
        if (entry) entry.caption = d.caption;
        break;
      }
      default:
        // a server op this client predates: resync from the snapshot
        await this.load();
        return;
    }
    this.seq = record.seq;
    this.emit();
  }

  itemsOnPage(pageId: string): CanvasItem[] {
    return [...this.items.values()]
      .filter((i) => i.page_id === pageId && !i.deleted)
      .sort((a, b) => a.z_order - b.z_order);
  }

  nodeForItem(itemId: string): ProvenanceNode | undefined {
    return [...this.nodes.values()].find((n) => n.item_id === itemId);
  }

  firstPage(): Page {
    const pages = [...this.pages.values()].sort((a, b) => a.created_at - b.created_at);
    if (!pages.length) throw new Error("document has no pages");
    return pages[0];
  }
}
