"""The orchestration facade wiring every subsystem together.

The Engine owns the blob store, the open documents, the compiler and the
generation gateway. Flows:

  ingest        -> decode, store blob, register asset, enqueue metadata job
  easel generate-> compile spec, freeze run (graph bytes into blob store),
                   touch inputs, submit to gateway
  job done      -> ingest outputs as assets, place near the easel, record
                   generation nodes with typed parent edges
  quick op      -> local result (palette/stencil cache) or small workflow

Everything the HTTP service exposes goes through here, so tests can drive
the full system without a server.
"""

from __future__ import annotations

import json
import logging
import random
import threading
from pathlib import Path

import numpy as np

from . import errors, mediainfo, raster
from .blobstore import BlobStore
from .compiler import Compiler, QuickOpPlan
from .config import EngineConfig
from .document import Document
from .easelspec import EaselSpec
from .gateway import DONE, Gateway, GenerationJob, MockDriver
from .ids import Clock, IdGen, uuid_gen, wall_clock
from .layout import pack_grid
from .model import Asset, CanvasItem
from .workflow import WorkflowGraph

logger = logging.getLogger(__name__)

# canvas footprint of a freshly placed asset: longest edge in canvas units
PLACED_EDGE = 512.0
EASEL_WIDTH = 420.0
OUTPUT_GAP = 24.0

CONTENT_TYPES = {
    "image": "image/png",
    "video": "video/mp4",
    "model3d": "model/gltf-binary",
    "audio": "audio/wav",
    "text": "text/plain; charset=utf-8",
    "sketch": "application/json",
}


def default_item_size(asset: Asset) -> tuple[float, float]:
    if asset.dims:
        w, h = asset.dims
        scale = PLACED_EDGE / max(w, h)
        return (w * scale, h * scale)
    return (PLACED_EDGE / 2, PLACED_EDGE / 2)


class Engine:
    def __init__(self, config: EngineConfig, idgen: IdGen = uuid_gen, clock: Clock = wall_clock, rng: random.Random | None = None):
        self.config = config
        self.idgen = idgen
        self.clock = clock
        self.rng = rng or random.Random()
        self.data_dir = Path(config.data_dir)
        self.blobs = BlobStore(self.data_dir / "blobs")
        self.compiler = Compiler()
        self.docs: dict[str, Document] = {}
        self._lock = threading.RLock()
        driver = self._make_driver()
        self.gateway = Gateway(
            driver,
            max_inflight=config.max_inflight,
            on_terminal=self._on_job_terminal,
            clock=clock,
            idgen=idgen,
        )

    def _make_driver(self):
        if self.config.backend_mode == "remote":
            from .remote import RemoteDriver

            return RemoteDriver(
                self.config.backend_url, client_id=self.config.client_id, blob_loader=self.blobs.get
            )
        return MockDriver(self.blobs.get, tick_delay=self.config.mock_tick_delay)

    def close(self) -> None:
        self.gateway.shutdown()
        for doc in self.docs.values():
            doc.close()

    def wait_idle(self, timeout: float = 60.0) -> None:
        self.gateway.drain(timeout=timeout)

    # ---------------------------------------------------------- documents

    def _doc_dir(self, doc_id: str) -> Path:
        return self.data_dir / "documents" / doc_id

    def create_document(self, name: str = "") -> Document:
        with self._lock:
            doc_id = self.idgen()
            doc = Document(
                doc_id,
                self.blobs,
                directory=self._doc_dir(doc_id),
                name=name or doc_id,
                idgen=self.idgen,
                clock=self.clock,
                snapshot_every=self.config.snapshot_every,
                fsync=self.config.fsync,
            )
            doc.create_page("Page 1")
            self.docs[doc_id] = doc
            return doc

    def list_documents(self) -> list[dict]:
        with self._lock:
            known = set(self.docs)
            root = self.data_dir / "documents"
            if root.exists():
                known |= {p.name for p in root.iterdir() if p.is_dir()}
            return [{"document_id": doc_id, "name": self.docs[doc_id].name if doc_id in self.docs else doc_id}
                    for doc_id in sorted(known)]

    def get_document(self, doc_id: str) -> Document:
        with self._lock:
            doc = self.docs.get(doc_id)
            if doc is None:
                directory = self._doc_dir(doc_id)
                if not directory.exists():
                    raise errors.UnknownDocument(f"document {doc_id} not found")
                doc = Document.load(
                    doc_id,
                    self.blobs,
                    directory,
                    idgen=self.idgen,
                    clock=self.clock,
                    snapshot_every=self.config.snapshot_every,
                    fsync=self.config.fsync,
                )
                self.docs[doc_id] = doc
            return doc

    # ------------------------------------------------------------- assets

    def ingest(
        self,
        doc_id: str,
        payload: bytes,
        kind: str,
        origin: dict | None = None,
        preprocess: bool = True,
        idem_key: str | None = None,
    ) -> Asset:
        """Decode, store and register a payload; images get a metadata job."""
        doc = self.get_document(doc_id)
        info = mediainfo.decode_payload(payload, kind)
        blob = self.blobs.put(payload)
        asset = doc.ingest_asset(
            blob,
            kind,
            origin=origin,
            dims=info.dims,
            duration=info.duration,
            caption=info.text if kind == "text" else None,
            idem_key=idem_key,
        )
        if kind == "image" and preprocess:
            self.enqueue_metadata(doc_id, asset.asset_id)
        return asset

    def enqueue_metadata(self, doc_id: str, asset_id: str) -> str:
        doc = self.get_document(doc_id)
        asset = doc.assets[asset_id]
        if asset.caption is not None and len(asset.control_maps) == 4:
            return ""  # already complete; preprocessing is idempotent
        graph = self.compiler.compile_metadata_job(asset)
        return self.gateway.submit(
            graph,
            run_id=f"meta-{asset_id}",
            meta={"purpose": "metadata", "document_id": doc_id, "asset_id": asset_id},
        )

    def content_type(self, asset: Asset) -> str:
        return CONTENT_TYPES.get(asset.kind, "application/octet-stream")

    # ----------------------------------------------------- raster easels

    def flatten_collage(
        self,
        doc_id: str,
        layers: list[dict],
        rect: dict,
        page_id: str,
        position: tuple[float, float] | None = None,
        idem_key: str | None = None,
    ) -> dict:
        """Glue image layers into a new asset; provenance links every layer."""
        doc = self.get_document(doc_id)
        if not layers:
            raise errors.EmptyLayerList("collage needs at least one layer")
        rect_w, rect_h = int(rect["w"]), int(rect["h"])
        if rect_w <= 0 or rect_h <= 0:
            raise errors.NonPositiveSize("collage rect must be positive")
        rect_x, rect_y = float(rect.get("x", 0)), float(rect.get("y", 0))
        composed: list[raster.Layer] = []
        for layer in layers:
            asset = doc.assets.get(layer["asset_id"])
            if asset is None:
                raise errors.UnknownAsset(f"asset {layer['asset_id']} not found")
            if asset.kind != "image":
                raise errors.NonImageLayer(f"asset {asset.asset_id} is {asset.kind}, not image")
            pixels = mediainfo.load_image_rgba(self.blobs.get(asset.blob))
            composed.append(
                raster.Layer(
                    pixels=pixels,
                    x=float(layer.get("x", 0)) - rect_x,
                    y=float(layer.get("y", 0)) - rect_y,
                    scale=float(layer.get("scale", 1.0)),
                    z=int(layer.get("z", 0)),
                    sort_key=asset.blob,
                )
            )
        out = raster.flatten_layers(composed, rect_w, rect_h)
        payload = mediainfo.write_png(out)
        run_id = self.idgen()
        asset = self.ingest(doc_id, payload, "image", origin={"type": "generated", "run_id": run_id}, idem_key=idem_key)
        params = {"type": "collage", "layers": layers, "rect": rect}
        doc.record_run(run_id, params, graph_blob=None, graph_hash=None)
        nodes = doc.record_generation(
            run_id,
            params,
            outputs=[{
                "asset_id": asset.asset_id,
                "page_id": page_id,
                "position": list(position or (rect_x, rect_y)),
                "size": list(default_item_size(asset)),
            }],
            parent_edges=[(layer["asset_id"], "collage_layer") for layer in layers],
        )
        return {"asset": asset.to_dict(), "nodes": [n.to_dict() for n in nodes]}

    def rasterize_strokes(
        self,
        doc_id: str,
        strokes: list[dict],
        rect: dict,
        page_id: str | None = None,
        place: bool = True,
        idem_key: str | None = None,
    ) -> dict:
        """Sketch/mask rasterization; deterministic bytes for provenance."""
        doc = self.get_document(doc_id)
        rect_w, rect_h = int(rect["w"]), int(rect["h"])
        if rect_w <= 0 or rect_h <= 0:
            raise errors.NonPositiveSize("sketch rect must be positive")
        out = raster.rasterize_strokes(strokes, rect_w, rect_h, origin=(float(rect.get("x", 0)), float(rect.get("y", 0))))
        payload = mediainfo.write_png(out)
        run_id = self.idgen()
        asset = self.ingest(doc_id, payload, "image", origin={"type": "generated", "run_id": run_id}, idem_key=idem_key)
        params = {"type": "sketch", "strokes": strokes, "rect": rect}
        doc.record_run(run_id, params, graph_blob=None, graph_hash=None)
        result: dict = {"asset": asset.to_dict()}
        if place and page_id:
            nodes = doc.record_generation(
                run_id,
                params,
                outputs=[{
                    "asset_id": asset.asset_id,
                    "page_id": page_id,
                    "position": [float(rect.get("x", 0)), float(rect.get("y", 0))],
                    "size": [float(rect_w), float(rect_h)],
                }],
                parent_edges=[],
            )
            result["nodes"] = [n.to_dict() for n in nodes]
        return result

    # ------------------------------------------------------------- easels

    def _roll_seed(self) -> int:
        return self.rng.getrandbits(63)

    def compile_easel(self, doc_id: str, easel_id: str) -> WorkflowGraph:
        doc = self.get_document(doc_id)
        easel = doc.easels.get(easel_id)
        if easel is None:
            raise errors.UnknownEasel(f"easel {easel_id} not found")
        spec = EaselSpec.from_dict(easel.spec)
        return self.compiler.compile(spec, doc.assets.get)

    def generate(self, doc_id: str, easel_id: str) -> dict:
        """Compile the easel, freeze the run and queue it on the backend."""
        doc = self.get_document(doc_id)
        easel = doc.easels.get(easel_id)
        if easel is None:
            raise errors.UnknownEasel(f"easel {easel_id} not found")
        spec_dict = dict(easel.spec)
        if spec_dict.get("seed") is None:
            spec_dict["seed"] = self._roll_seed()
            doc.update_easel(easel_id, spec_dict)
        spec = EaselSpec.from_dict(spec_dict)
        graph = self.compiler.compile(spec, doc.assets.get)
        run_id = self.idgen()
        graph_bytes = graph.canonical()
        graph_blob = self.blobs.put(graph_bytes)
        params = {"type": "easel", "spec": spec.to_dict()}
        doc.record_run(run_id, params, graph_blob=graph_blob, graph_hash=graph.digest())
        for asset_id, _role in spec.asset_refs():
            node = doc.origin_node_of_asset(asset_id)
            if node is not None and node.item_id in doc.items:
                doc.touch_item(node.item_id)  # use-as-input counts as engagement
        job_id = self.gateway.submit(
            graph,
            run_id=run_id,
            meta={
                "purpose": "easel",
                "document_id": doc_id,
                "run_id": run_id,
                "page_id": easel.page_id,
                "anchor": [easel.position[0] + EASEL_WIDTH + OUTPUT_GAP, easel.position[1]],
                "parent_edges": [[a, r] for a, r in spec.asset_refs()],
            },
        )
        return {"job_id": job_id, "run_id": run_id, "graph_hash": graph.digest()}

    # ---------------------------------------------------------- quick ops

    def quick_op(
        self,
        doc_id: str,
        op_kind: str,
        asset_id: str,
        prompt: str | None = None,
        page_id: str | None = None,
        idem_key: str | None = None,
    ) -> dict:
        doc = self.get_document(doc_id)
        asset = doc.assets.get(asset_id)
        if asset is None:
            raise errors.UnknownAsset(f"asset {asset_id} not found")
        plan = self.compiler.compile_quick_op(
            op_kind, asset, prompt, seed=self._roll_seed(), resolve=doc.assets.get, blob_loader=self.blobs.get
        )
        origin_item = None
        origin_node = doc.origin_node_of_asset(asset_id)
        if origin_node is not None:
            origin_item = doc.items.get(origin_node.item_id)
        if page_id is None:
            page_id = origin_item.page_id if origin_item else next(iter(doc.pages))
        anchor = (
            [origin_item.position[0] + origin_item.size[0] + OUTPUT_GAP, origin_item.position[1]]
            if origin_item
            else [0.0, 0.0]
        )
        if origin_item is not None:
            doc.touch_item(origin_item.item_id)

        if plan.local is not None:
            return self._apply_local_quick_op(doc, plan, asset, page_id, anchor, idem_key)

        run_id = self.idgen()
        graph_bytes = plan.graph.canonical()
        graph_blob = self.blobs.put(graph_bytes)
        doc.record_run(run_id, plan.params, graph_blob=graph_blob, graph_hash=plan.graph.digest())
        job_id = self.gateway.submit(
            plan.graph,
            run_id=run_id,
            meta={
                "purpose": "quick_op",
                "document_id": doc.doc_id,
                "run_id": run_id,
                "page_id": page_id,
                "anchor": anchor,
                "parent_edges": [[asset_id, "input_image"]],
            },
        )
        return {"job_id": job_id, "run_id": run_id}

    def _apply_local_quick_op(self, doc: Document, plan: QuickOpPlan, asset: Asset, page_id: str, anchor, idem_key) -> dict:
        run_id = self.idgen()
        doc.record_run(run_id, plan.params, graph_blob=None, graph_hash=None)
        outputs = []
        if plan.op_kind == "palette":
            payload = render_palette_card(plan.local["colors"])
            out_asset = self.ingest(
                doc.doc_id, payload, "image",
                origin={"type": "quick_op", "kind": plan.op_kind, "parent_asset_id": asset.asset_id},
                preprocess=False, idem_key=idem_key,
            )
            outputs.append(out_asset)
        else:  # stencil served from the precomputed control maps
            for map_kind in ("pose", "depth", "scribble", "lineart"):
                blob = plan.local["maps"][map_kind]
                out_asset = doc.ingest_asset(
                    blob,
                    "image",
                    origin={"type": "quick_op", "kind": plan.op_kind, "parent_asset_id": asset.asset_id},
                    dims=asset.dims,
                    idem_key=f"{idem_key}:{map_kind}" if idem_key else None,
                )
                outputs.append(out_asset)
        placements = []
        x, y = anchor
        for out_asset in outputs:
            size = default_item_size(out_asset)
            placements.append({
                "asset_id": out_asset.asset_id,
                "page_id": page_id,
                "position": [x, y],
                "size": list(size),
            })
            x += size[0] + OUTPUT_GAP
        nodes = doc.record_generation(
            run_id, plan.params, placements, parent_edges=[(asset.asset_id, "input_image")], node_type="quick_op"
        )
        return {
            "run_id": run_id,
            "result": plan.local,
            "assets": [a.to_dict() for a in outputs],
            "nodes": [n.to_dict() for n in nodes],
        }

    # ------------------------------------------------------- job plumbing

    def _on_job_terminal(self, job: GenerationJob) -> None:
        if job.status != DONE:
            return
        try:
            self.fetch_outputs(job.job_id)
        except Exception:
            logger.exception("failed to ingest outputs of job %s", job.job_id)

    def fetch_outputs(self, job_id: str) -> dict:
        """Ingest a finished job's outputs; idempotent, inputs untouched."""
        job = self.gateway.get(job_id)
        outputs = self.gateway.fetch_outputs(job_id)  # raises NotDone
        with self._lock:
            if job.outputs_fetched:
                return job.meta.get("result", {})
            job.outputs_fetched = True
        purpose = job.meta.get("purpose")
        doc = self.get_document(job.meta["document_id"])
        if purpose == "metadata":
            result = self._ingest_metadata(doc, job)
        else:
            result = self._ingest_generation(doc, job, node_type="generated" if purpose == "easel" else "quick_op")
        job.meta["result"] = result
        return result

    def _ingest_metadata(self, doc: Document, job: GenerationJob) -> dict:
        asset_id = job.meta["asset_id"]
        caption = None
        maps: dict[str, str] = {}
        for output in job.outputs:
            if output.kind == "text":
                caption = output.payload.decode("utf-8")
            else:
                map_kind = output.node_id.rsplit("_", 1)[-1]
                maps[map_kind] = self.blobs.put(output.payload)
        doc.set_metadata(asset_id, caption, maps)
        return {"asset_id": asset_id, "caption": caption, "control_maps": maps}

    def _ingest_generation(self, doc: Document, job: GenerationJob, node_type: str) -> dict:
        run = doc.runs.get(job.run_id)
        params = run.params if run else {}
        assets = []
        placements = []
        x, y = job.meta.get("anchor", [0.0, 0.0])
        for output in job.outputs:
            asset = self.ingest(
                doc.doc_id,
                output.payload,
                output.kind,
                origin={"type": "generated", "run_id": job.run_id}
                if node_type == "generated"
                else {"type": "quick_op", "kind": params.get("kind"), "parent_asset_id": job.meta.get("parent_edges", [[None]])[0][0]},
                preprocess=output.kind == "image",
            )
            assets.append(asset)
            size = default_item_size(asset)
            placements.append({
                "asset_id": asset.asset_id,
                "page_id": job.meta["page_id"],
                "position": [x, y],
                "size": list(size),
            })
            x += size[0] + OUTPUT_GAP
        nodes = doc.record_generation(
            job.run_id,
            params,
            placements,
            parent_edges=[tuple(e) for e in job.meta.get("parent_edges", [])],
            node_type=node_type,
        )
        return {"assets": [a.to_dict() for a in assets], "nodes": [n.to_dict() for n in nodes]}

    # --------------------------------------------------------- provenance

    def recreate(self, doc_id: str, node_id: str) -> dict:
        return self.get_document(doc_id).recreate_params(node_id)

    def recompile_params(self, doc_id: str, params: dict) -> WorkflowGraph:
        doc = self.get_document(doc_id)
        return self.compiler.compile_params(params, doc.assets.get, blob_loader=self.blobs.get)

    # ------------------------------------------------------- organization

    def export_exhibit(self, doc_id: str, target_dir: str | Path | None = None) -> dict:
        """Write the exhibit as an ordered manifest plus media files."""
        doc = self.get_document(doc_id)
        target = Path(target_dir) if target_dir else self.data_dir / "exports" / doc_id
        target.mkdir(parents=True, exist_ok=True)
        entries = []
        for index, entry in enumerate(doc.exhibit):
            asset = doc.assets[entry.asset_id]
            ext = {"image": "png", "video": "mp4", "model3d": "glb", "text": "txt"}.get(asset.kind, "bin")
            filename = f"{index:03d}_{asset.blob[:12]}.{ext}"
            (target / filename).write_bytes(self.blobs.get(asset.blob))
            entries.append(
                {
                    "index": index,
                    "entry_id": entry.entry_id,
                    "asset_id": entry.asset_id,
                    "caption": entry.caption,
                    "file": filename,
                    "kind": asset.kind,
                }
            )
        manifest = {"document_id": doc_id, "name": doc.name, "entries": entries}
        (target / "manifest.json").write_text(json.dumps(manifest, indent=1))
        return {"dir": str(target), "manifest": manifest}

    def pack_grid(self, doc_id: str, item_ids: list[str], cell_gap: float, idem_key: str | None = None) -> list[CanvasItem]:
        doc = self.get_document(doc_id)
        entries = []
        for item_id in item_ids:
            item = doc.items.get(item_id)
            if item is None:
                raise errors.UnknownItem(f"item {item_id} not found")
            entries.append((item.item_id, item.position[0], item.position[1], item.size[0], item.size[1]))
        moves = pack_grid(entries, cell_gap)
        return doc.apply_layout(moves, idem_key=idem_key)


def render_palette_card(colors: list[dict], band: int = 64, height: int = 160) -> bytes:
    """Palette quick-op output: one vertical band per color."""
    if not colors:
        return mediainfo.write_png(np.zeros((height, band, 4), dtype=np.uint8))
    card = np.zeros((height, band * len(colors), 4), dtype=np.uint8)
    for i, entry in enumerate(colors):
        rgba = raster.parse_color(entry["color"])
        card[:, i * band:(i + 1) * band] = rgba
    return mediainfo.write_png(card)
