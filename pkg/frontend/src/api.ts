// HTTP + SSE client for the engine. Every canvas action round-trips
// through these endpoints; nothing is computed client-side.

import type {
  Asset,
  CanvasItem,
  Collection,
  DocumentState,
  Easel,
  EaselSpec,
  ExhibitEntry,
  HistoryEntry,
  JobEvent,
  LineageResult,
  MutationRecord,
  SearchHit,
  TimelineEntry,
  TrailPoint,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public violations: string[] = [],
  ) {
    super(message);
  }
}

async function expectJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let code = "http_error";
    let message = response.statusText;
    let violations: string[] = [];
    try {
      const body = await response.json();
      code = body.error ?? code;
      message = body.message ?? message;
      violations = body.violations ?? [];
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, code, message, violations);
  }
  return (await response.json()) as T;
}

export async function* sseFrames(response: Response): AsyncGenerator<unknown> {
  if (!response.ok || !response.body) {
    throw new ApiError(response.status, "stream_error", response.statusText);
  }
  const reader = response.body.getReader();
  const decoder = new TextDecoder();
  let buffer = "";
  try {
    while (true) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let split;
      while ((split = buffer.indexOf("\n\n")) >= 0) {
        const frame = buffer.slice(0, split);
        buffer = buffer.slice(split + 2);
        for (const line of frame.split("\n")) {
          if (line.startsWith("data: ")) {
            yield JSON.parse(line.slice(6));
          }
        }
      }
    }
  } finally {
    reader.releaseLock();
  }
}

export class EngineApi {
  constructor(public baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private async post<T>(path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.url(path), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? "{}" : JSON.stringify(body),
    });
    return expectJson<T>(response);
  }

  private async get<T>(path: string): Promise<T> {
    return expectJson<T>(await fetch(this.url(path)));
  }

  // documents ---------------------------------------------------------

  createDocument(name: string): Promise<{ document_id: string; name: string }> {
    return this.post("/documents", { name });
  }

  listDocuments(): Promise<{ documents: { document_id: string; name: string }[] }> {
    return this.get("/documents");
  }

  documentState(docId: string): Promise<DocumentState> {
    return this.get(`/documents/${docId}/state`);
  }

  async *documentEvents(docId: string, signal?: AbortSignal): AsyncGenerator<MutationRecord> {
    const response = await fetch(this.url(`/documents/${docId}/events`), { signal });
    for await (const frame of sseFrames(response)) {
      const payload = frame as { kind: string; record?: MutationRecord };
      if (payload.kind === "mutation" && payload.record) {
        yield payload.record;
      }
    }
  }

  // assets and items ---------------------------------------------------

  async ingest(docId: string, payload: ArrayBuffer | Uint8Array | string, kind: string): Promise<Asset> {
    const body = typeof payload === "string" ? new TextEncoder().encode(payload) : payload;
    const response = await fetch(this.url(`/documents/${docId}/assets?kind=${kind}`), {
      method: "POST",
      headers: { "Content-Type": "application/octet-stream" },
      body: body as BodyInit,
    });
    return expectJson<Asset>(response);
  }

  blobUrl(docId: string, assetId: string): string {
    return this.url(`/documents/${docId}/assets/${assetId}/blob`);
  }

  placeItem(
    docId: string,
    assetId: string,
    pageId: string,
    position: [number, number],
    size: [number, number],
  ): Promise<CanvasItem> {
    return this.post(`/documents/${docId}/items`, {
      asset_id: assetId,
      page_id: pageId,
      position,
      size,
    });
  }

  touchItem(docId: string, itemId: string): Promise<CanvasItem> {
    return this.post(`/documents/${docId}/items/${itemId}/touch`);
  }

  setEmphasis(docId: string, itemId: string, level: number): Promise<CanvasItem> {
    return this.post(`/documents/${docId}/items/${itemId}/emphasis`, { level });
  }

  moveItem(
    docId: string,
    itemId: string,
    position?: [number, number],
    size?: [number, number],
  ): Promise<CanvasItem> {
    return this.post(`/documents/${docId}/items/${itemId}/move`, { position, size });
  }

  async deleteItem(docId: string, itemId: string): Promise<void> {
    await expectJson(await fetch(this.url(`/documents/${docId}/items/${itemId}`), { method: "DELETE" }));
  }

  restoreItem(docId: string, itemId: string): Promise<unknown> {
    return this.post(`/documents/${docId}/items/${itemId}/restore`);
  }

  // raster easels ------------------------------------------------------

  flattenCollage(
    docId: string,
    layers: { asset_id: string; x: number; y: number; scale?: number; z?: number }[],
    rect: { x: number; y: number; w: number; h: number },
    pageId: string,
  ): Promise<{ asset: Asset }> {
    return this.post(`/documents/${docId}/collage`, { layers, rect, page_id: pageId });
  }

  sketch(
    docId: string,
    strokes: { points: [number, number][]; width: number; color: string }[],
    rect: { x: number; y: number; w: number; h: number },
    pageId: string | null,
    place: boolean,
  ): Promise<{ asset: Asset }> {
    return this.post(`/documents/${docId}/sketch`, { strokes, rect, page_id: pageId, place });
  }

  // easels and jobs ----------------------------------------------------

  createEasel(docId: string, pageId: string, spec: EaselSpec, position: [number, number]): Promise<Easel> {
    return this.post(`/documents/${docId}/easels`, { page_id: pageId, spec, position });
  }

  async updateEasel(docId: string, easelId: string, spec: EaselSpec): Promise<Easel> {
    const response = await fetch(this.url(`/documents/${docId}/easels/${easelId}`), {
      method: "PATCH",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ spec }),
    });
    return expectJson<Easel>(response);
  }

  compileEasel(docId: string, easelId: string): Promise<{ graph: unknown; hash: string }> {
    return this.post(`/documents/${docId}/easels/${easelId}/compile`);
  }

  generate(docId: string, easelId: string): Promise<{ job_id: string; run_id: string }> {
    return this.post(`/documents/${docId}/easels/${easelId}/generate`);
  }

  quickOp(
    docId: string,
    kind: string,
    assetId: string,
    prompt?: string,
  ): Promise<{ job_id?: string; run_id: string; result?: unknown }> {
    return this.post(`/documents/${docId}/quick_op`, { kind, asset_id: assetId, prompt });
  }

  jobStatus(jobId: string): Promise<{ status: string; progress: number }> {
    return this.get(`/jobs/${jobId}`);
  }

  cancelJob(jobId: string): Promise<{ status: string }> {
    return this.post(`/jobs/${jobId}/cancel`);
  }

  async *jobEvents(jobId: string, signal?: AbortSignal): AsyncGenerator<JobEvent> {
    const response = await fetch(this.url(`/jobs/${jobId}/events`), { signal });
    for await (const frame of sseFrames(response)) {
      yield frame as JobEvent;
    }
  }

  async waitForJob(jobId: string): Promise<JobEvent> {
    let last: JobEvent | null = null;
    for await (const event of this.jobEvents(jobId)) {
      last = event;
      if (event.kind === "status" && ["done", "failed", "cancelled"].includes(event.status)) {
        return event;
      }
    }
    throw new ApiError(500, "stream_ended", `job ${jobId} stream ended without terminal status (${last?.status})`);
  }

  // provenance ---------------------------------------------------------

  lineage(docId: string, nodeId: string): Promise<LineageResult> {
    return this.get(`/documents/${docId}/provenance/${nodeId}/lineage`);
  }

  recreate(docId: string, nodeId: string): Promise<{ params: { type: string; spec?: EaselSpec } }> {
    return this.get(`/documents/${docId}/provenance/${nodeId}/recreate`);
  }

  provenanceExport(docId: string): Promise<{ nodes: unknown[]; edges: [string, string, string][] }> {
    return this.get(`/documents/${docId}/provenance/export`);
  }

  history(docId: string, cursor: number): Promise<{ window: HistoryEntry[] }> {
    return this.get(`/documents/${docId}/history?cursor=${cursor}`);
  }

  trails(docId: string, bucket?: number): Promise<{ path: TrailPoint[] }> {
    return this.get(`/documents/${docId}/trails${bucket ? `?bucket=${bucket}` : ""}`);
  }

  heatmap(docId: string): Promise<{ weights: Record<string, number> }> {
    return this.get(`/documents/${docId}/heatmap`);
  }

  timeline(docId: string, width: number): Promise<{ entries: TimelineEntry[] }> {
    return this.get(`/documents/${docId}/timeline?width=${width}`);
  }

  search(docId: string, query: string): Promise<{ results: SearchHit[] }> {
    return this.get(`/documents/${docId}/search?q=${encodeURIComponent(query)}`);
  }

  // organization -------------------------------------------------------

  createCollection(docId: string, name: string, assetIds: string[], tags: string[]): Promise<Collection> {
    return this.post(`/documents/${docId}/collections`, { name, asset_ids: assetIds, tags });
  }

  listCollections(docId: string): Promise<{ collections: Collection[] }> {
    return this.get(`/documents/${docId}/collections`);
  }

  addToCollection(docId: string, collectionId: string, assetId: string): Promise<Collection> {
    return this.post(`/documents/${docId}/collections/${collectionId}/assets`, { asset_id: assetId });
  }

  instantiateFromCollection(
    docId: string,
    collectionId: string,
    assetId: string,
    pageId: string,
    position: [number, number],
  ): Promise<CanvasItem> {
    return this.post(`/documents/${docId}/collections/${collectionId}/instantiate`, {
      asset_id: assetId,
      page_id: pageId,
      position,
    });
  }

  exhibitAdd(docId: string, assetId: string, caption = ""): Promise<ExhibitEntry> {
    return this.post(`/documents/${docId}/exhibit`, { asset_id: assetId, caption });
  }

  exhibitList(docId: string): Promise<{ entries: ExhibitEntry[] }> {
    return this.get(`/documents/${docId}/exhibit`);
  }

  async exhibitUpdate(docId: string, entryId: string, patch: { index?: number; caption?: string }): Promise<ExhibitEntry> {
    const response = await fetch(this.url(`/documents/${docId}/exhibit/${entryId}`), {
      method: "PATCH",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(patch),
    });
    return expectJson<ExhibitEntry>(response);
  }

  packGrid(docId: string, itemIds: string[], cellGap: number): Promise<{ items: CanvasItem[] }> {
    return this.post(`/documents/${docId}/grid`, { item_ids: itemIds, cell_gap: cellGap });
  }
}
