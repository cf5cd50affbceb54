// Wire types mirroring the engine's JSON schemas. The UI holds no
// authoritative state: these are snapshots of what the server owns.

export type AssetKind = "image" | "video" | "text" | "audio" | "model3d" | "sketch";
export type EaselKind = "draw" | "paint" | "trace" | "modify" | "animate";

export interface Asset {
  asset_id: string;
  kind: AssetKind;
  blob: string;
  created_at: number;
  dims: [number, number] | null;
  duration: number | null;
  caption: string | null;
  control_maps: Record<string, string>;
  origin: { type: string; run_id?: string; kind?: string; parent_asset_id?: string };
}

export interface CanvasItem {
  item_id: string;
  page_id: string;
  asset_id: string | null;
  position: [number, number];
  size: [number, number];
  z_order: number;
  created_at: number;
  emphasis: number;
  click_count: number;
  last_interaction_at: number;
  deleted: boolean;
}

export interface ProvenanceNode {
  node_id: string;
  item_id: string;
  asset_id: string | null;
  node_kind: { type: string; of?: string; run_id?: string };
  created_at: number;
  parents: [string, string][];
  params_snapshot: Record<string, unknown> | null;
  deleted: boolean;
  last_interaction_at: number;
  click_count: number;
}

export interface Page {
  page_id: string;
  name: string;
  created_at: number;
}

export interface Easel {
  easel_id: string;
  page_id: string;
  position: [number, number];
  created_at: number;
  spec: EaselSpec;
}

export interface ReferenceSlot {
  asset_id: string;
  strength?: number;
  mask_asset_id?: string | null;
}

export interface EaselSpec {
  kind: EaselKind;
  backend_model?: string;
  prompt?: string;
  negative_prompt?: string;
  style_presets?: [string, number][];
  details?: number;
  adherence?: number;
  preserve?: number;
  start_image?: string | null;
  references?: ReferenceSlot[];
  style_reference?: string | null;
  structure?: { asset_id: string; map_kind: string; strength?: number } | null;
  trace_source_prompt?: string;
  trace_target_prompt?: string;
  retrace_range?: [number, number];
  prompt_pills?: string[];
  aspect_ratio?: string | null;
  first_frame?: string | null;
  last_frame?: string | null;
  seed?: number | null;
  steps?: number | null;
}

export interface Run {
  run_id: string;
  params: { type: string; spec?: EaselSpec; kind?: string };
  graph_blob: string | null;
  graph_hash: string | null;
  submitted_at: number;
  output_node_ids: string[];
}

export interface Collection {
  collection_id: string;
  name: string;
  created_at: number;
  tags: string[];
  members: string[];
}

export interface ExhibitEntry {
  entry_id: string;
  asset_id: string;
  created_at: number;
  caption: string;
}

export interface DocumentState {
  document_id: string;
  name: string;
  seq: number;
  pages: Page[];
  assets: Asset[];
  items: CanvasItem[];
  nodes: ProvenanceNode[];
  easels: Easel[];
  runs: Run[];
  collections: Collection[];
  exhibit: ExhibitEntry[];
  interactions: [number, string, number, number][];
}

export interface JobEvent {
  seq: number;
  job_id: string;
  kind: "status" | "progress";
  status: "queued" | "running" | "done" | "failed" | "cancelled";
  progress: number;
  ts: number;
}

export interface MutationRecord {
  seq: number;
  ts: number;
  op: string;
  data: Record<string, unknown>;
  idem?: string;
}

export interface HistoryEntry {
  item_id: string;
  created_at: number;
  position: [number, number];
  size: [number, number];
  page_id: string;
  asset_id: string | null;
}

export interface TrailPoint {
  t: number;
  x: number;
  y: number;
}

export interface TimelineEntry {
  item_id: string;
  node_id: string;
  asset_id: string | null;
  created_at: number;
  x: number;
  related: { parents: string[]; children: string[] };
}

export interface LineageResult {
  node_id: string;
  ancestors: ProvenanceNode[];
  descendants: ProvenanceNode[];
  edges: [string, string, string][];
}

export interface SearchHit {
  asset: Asset;
  score: number;
}
