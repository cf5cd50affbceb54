// Browser bootstrap: a minimal DOM renderer over the view models. The
// heavy lifting (state, layout math, overlays) lives in the testable
// modules; this file only paints and forwards input.

import { EngineApi } from "./api";
import { CanvasView } from "./canvas";
import { EaselWidget } from "./easels";
import { HeatmapOverlay, HistoryOverlay, LineagePanel, TrailsOverlay } from "./overlays";
import { QuickOpMenu } from "./quickops";
import { DocumentStore } from "./store";
import type { EaselKind } from "./types";

async function boot(): Promise<void> {
  const api = new EngineApi(localStorage.getItem("engine_url") ?? "http://127.0.0.1:8911");
  const docs = await api.listDocuments();
  const docId = docs.documents[0]?.document_id ?? (await api.createDocument("untitled")).document_id;
  const store = new DocumentStore(api, docId);
  await store.load();
  void store.follow();

  const view = new CanvasView(store, api);
  const history = new HistoryOverlay(api, store);
  const heatmap = new HeatmapOverlay(api, store);
  const trails = new TrailsOverlay(api, store);
  const lineage = new LineagePanel(api, store);
  const quickOps = new QuickOpMenu(api, store);

  const root = document.getElementById("canvas-root")!;
  const toolbar = document.getElementById("toolbar")!;

  function paint(): void {
    root.replaceChildren();
    for (const entry of view.displayList()) {
      const el = document.createElement("div");
      el.className = "canvas-item" + (entry.selected ? " selected" : "");
      el.style.cssText = `position:absolute;left:${entry.screen.x}px;top:${entry.screen.y}px;width:${entry.screen.w}px;height:${entry.screen.h}px;opacity:${entry.opacity};`;
      if (entry.highlight) el.dataset.highlight = entry.highlight;
      const asset = entry.item.asset_id ? store.assets.get(entry.item.asset_id) : null;
      if (asset?.kind === "image") {
        const img = document.createElement("img");
        img.src = api.blobUrl(docId, asset.asset_id);
        img.draggable = false;
        img.style.cssText = "width:100%;height:100%;object-fit:contain;";
        el.appendChild(img);
      } else {
        el.textContent = asset?.caption ?? asset?.kind ?? "";
      }
      el.addEventListener("click", () => void view.select(entry.item.item_id).then(paint));
      root.appendChild(el);
    }
  }

  store.onChange(paint);

  for (const kind of ["draw", "paint", "trace", "modify", "animate"] as EaselKind[]) {
    const button = document.createElement("button");
    button.textContent = kind;
    button.addEventListener("click", () => {
      const widget = new EaselWidget(api, store, kind, [view.camera.x + 100, view.camera.y + 100]);
      renderWidget(widget);
    });
    toolbar.appendChild(button);
  }

  function renderWidget(widget: EaselWidget): void {
    const panel = document.getElementById("easel-panel")!;
    panel.replaceChildren();
    const title = document.createElement("h3");
    title.textContent = `${widget.kind} easel`;
    panel.appendChild(title);
    for (const slot of widget.slots()) {
      const row = document.createElement("div");
      row.className = "slot";
      row.dataset.slot = slot;
      row.textContent = slot;
      panel.appendChild(row);
    }
    const go = document.createElement("button");
    go.textContent = "generate";
    go.addEventListener("click", () => {
      void widget.generate((p) => (go.textContent = `${p.status} ${(p.progress * 100) | 0}%`)).then(() => {
        go.textContent = "generate";
      });
    });
    panel.appendChild(go);
  }

  root.addEventListener("dragover", (e) => e.preventDefault());
  root.addEventListener("drop", (e) => {
    e.preventDefault();
    const files = Array.from(e.dataTransfer?.files ?? ([] as File[]));
    void Promise.all(
      files.map(async (f) => ({ name: f.name, bytes: await f.arrayBuffer(), mime: f.type })),
    ).then((loaded) => view.dropFiles(loaded, [e.offsetX, e.offsetY]));
  });

  // overlay hotkeys: h history, a activity, t trails
  document.addEventListener("keydown", (e) => {
    if (e.key === "h") void history.setCursor(history.cursor).then(() => (history.applyTo(view), paint()));
    if (e.key === "a") void heatmap.refresh().then(() => (heatmap.applyTo(view), paint()));
    if (e.key === "t") void trails.refresh().then(paint);
    if (e.key === "l" && view.selection.size) {
      void lineage.openForItem([...view.selection][0]);
    }
    if (e.key === "q" && view.selection.size) {
      const item = store.items.get([...view.selection][0]);
      if (item?.asset_id) console.table(quickOps.opsFor(item.asset_id));
    }
  });

  paint();
}

void boot();
