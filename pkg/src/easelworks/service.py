"""HTTP boundary: JSON request/response API plus server-push event streams.

The canvas UI is a thin projection of server state: every mutation lands in
the document journal and is simultaneously emitted on the per-document SSE
channel, so any number of views converge. Mutating endpoints accept an
`idempotency_key` and are safe to retry.
"""

from __future__ import annotations

import json
import queue
from typing import Iterator

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, StreamingResponse

from . import errors
from .easelspec import ANIMATE_PILLS, ASPECT_RATIOS, EASEL_KINDS, MODIFY_PILLS, STYLE_PRESETS
from .engine import Engine
from .gateway import TERMINAL

SSE_HEADERS = {"Cache-Control": "no-cache", "Connection": "keep-alive", "X-Accel-Buffering": "no"}


def sse_frame(payload: dict) -> str:
    return f"data: {json.dumps(payload, separators=(',', ':'))}\n\n"


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="easelworks engine", version="0.1.0")
    app.state.engine = engine

    @app.exception_handler(errors.EngineError)
    async def engine_error_handler(_request: Request, exc: errors.EngineError):
        return JSONResponse(status_code=exc.http_status, content=exc.payload())

    @app.get("/healthz")
    def healthz():
        return {"ok": True, "backend_mode": engine.config.backend_mode}

    @app.get("/capabilities")
    def capabilities():
        return {
            "easel_kinds": list(EASEL_KINDS),
            "style_presets": list(STYLE_PRESETS),
            "modify_pills": sorted(MODIFY_PILLS),
            "animate_pills": list(ANIMATE_PILLS),
            "aspect_ratios": list(ASPECT_RATIOS),
        }

    # ---------------------------------------------------------- documents

    @app.post("/documents")
    async def create_document(request: Request):
        body = await _json(request)
        doc = engine.create_document(body.get("name", ""))
        return {"document_id": doc.doc_id, "name": doc.name}

    @app.get("/documents")
    def list_documents():
        return {"documents": engine.list_documents()}

    @app.get("/documents/{doc_id}/state")
    def document_state(doc_id: str):
        doc = engine.get_document(doc_id)
        with doc._lock:
            state = doc.state_dict()
        state["document_id"] = doc.doc_id
        state["name"] = doc.name
        state["seq"] = doc.seq
        return state

    @app.get("/documents/{doc_id}/events")
    def document_events(doc_id: str, limit: int | None = None, since: int | None = None):
        """Mutation stream; `limit` ends the stream after N frames (handy for
        buffered clients), `since` replays history from that journal seq."""
        doc = engine.get_document(doc_id)
        q: queue.Queue = queue.Queue()
        unsubscribe = doc.subscribe(q.put)

        def stream() -> Iterator[str]:
            sent = 0
            try:
                yield sse_frame({"kind": "hello", "seq": doc.seq})
                while limit is None or sent < limit:
                    try:
                        record = q.get(timeout=1.0)
                        if since is not None and record["seq"] <= since:
                            continue
                        yield sse_frame({"kind": "mutation", "record": record})
                        sent += 1
                    except queue.Empty:
                        yield ": keepalive\n\n"
            finally:
                unsubscribe()

        return StreamingResponse(stream(), media_type="text/event-stream", headers=SSE_HEADERS)

    @app.post("/documents/{doc_id}/pages")
    async def create_page(doc_id: str, request: Request):
        body = await _json(request)
        page = engine.get_document(doc_id).create_page(body.get("name", "Page"), idem_key=body.get("idempotency_key"))
        return page.to_dict()

    # ------------------------------------------------------------- assets

    @app.post("/documents/{doc_id}/assets")
    async def ingest_asset(doc_id: str, request: Request, kind: str = "image"):
        payload = await request.body()
        asset = engine.ingest(
            doc_id, payload, kind, idem_key=request.headers.get("idempotency-key")
        )
        return asset.to_dict()

    @app.get("/documents/{doc_id}/assets/{asset_id}")
    def asset_meta(doc_id: str, asset_id: str):
        doc = engine.get_document(doc_id)
        asset = doc.assets.get(asset_id)
        if asset is None:
            raise errors.UnknownAsset(f"asset {asset_id} not found")
        return asset.to_dict()

    @app.get("/documents/{doc_id}/assets/{asset_id}/blob")
    def asset_blob(doc_id: str, asset_id: str):
        doc = engine.get_document(doc_id)
        asset = doc.assets.get(asset_id)
        if asset is None:
            raise errors.UnknownAsset(f"asset {asset_id} not found")
        return Response(content=engine.blobs.get(asset.blob), media_type=engine.content_type(asset))

    @app.get("/documents/{doc_id}/blobs/{digest}")
    def raw_blob(doc_id: str, digest: str):
        engine.get_document(doc_id)
        return Response(content=engine.blobs.get(digest), media_type="application/octet-stream")

    # -------------------------------------------------------------- items

    @app.post("/documents/{doc_id}/items")
    async def place_item(doc_id: str, request: Request):
        body = await _json(request)
        item = engine.get_document(doc_id).place_item(
            body["asset_id"],
            body["page_id"],
            tuple(body.get("position", (0.0, 0.0))),
            tuple(body.get("size", (200.0, 200.0))),
            idem_key=body.get("idempotency_key"),
        )
        return item.to_dict()

    @app.post("/documents/{doc_id}/items/{item_id}/touch")
    def touch_item(doc_id: str, item_id: str):
        return engine.get_document(doc_id).touch_item(item_id).to_dict()

    @app.post("/documents/{doc_id}/items/{item_id}/emphasis")
    async def set_emphasis(doc_id: str, item_id: str, request: Request):
        body = await _json(request)
        return engine.get_document(doc_id).set_emphasis(item_id, float(body["level"])).to_dict()

    @app.post("/documents/{doc_id}/items/{item_id}/move")
    async def move_item(doc_id: str, item_id: str, request: Request):
        body = await _json(request)
        position = tuple(body["position"]) if body.get("position") else None
        size = tuple(body["size"]) if body.get("size") else None
        return engine.get_document(doc_id).move_item(item_id, position, size).to_dict()

    @app.delete("/documents/{doc_id}/items/{item_id}")
    def delete_item(doc_id: str, item_id: str):
        doc = engine.get_document(doc_id)
        node = doc.node_for_item(item_id)
        if node is None:
            raise errors.UnknownItem(f"item {item_id} not found")
        return doc.soft_delete(node.node_id).to_dict()

    @app.post("/documents/{doc_id}/items/{item_id}/restore")
    def restore_item(doc_id: str, item_id: str):
        doc = engine.get_document(doc_id)
        node = doc.node_for_item(item_id)
        if node is None:
            raise errors.UnknownItem(f"item {item_id} not found")
        return doc.restore(node.node_id).to_dict()

    # ---------------------------------------------------- raster easels

    @app.post("/documents/{doc_id}/collage")
    async def flatten_collage(doc_id: str, request: Request):
        body = await _json(request)
        return engine.flatten_collage(
            doc_id,
            body["layers"],
            body["rect"],
            body["page_id"],
            position=tuple(body["position"]) if body.get("position") else None,
            idem_key=body.get("idempotency_key"),
        )

    @app.post("/documents/{doc_id}/sketch")
    async def rasterize(doc_id: str, request: Request):
        body = await _json(request)
        return engine.rasterize_strokes(
            doc_id,
            body.get("strokes", []),
            body["rect"],
            page_id=body.get("page_id"),
            place=body.get("place", True),
            idem_key=body.get("idempotency_key"),
        )

    # ------------------------------------------------------------- easels

    @app.post("/documents/{doc_id}/easels")
    async def create_easel(doc_id: str, request: Request):
        body = await _json(request)
        easel = engine.get_document(doc_id).create_easel(
            body["page_id"],
            body.get("spec", {"kind": body.get("kind", "draw")}),
            tuple(body.get("position", (0.0, 0.0))),
            idem_key=body.get("idempotency_key"),
        )
        return easel.to_dict()

    @app.get("/documents/{doc_id}/easels")
    def list_easels(doc_id: str):
        doc = engine.get_document(doc_id)
        return {"easels": [e.to_dict() for e in doc.easels.values()]}

    @app.patch("/documents/{doc_id}/easels/{easel_id}")
    async def update_easel(doc_id: str, easel_id: str, request: Request):
        body = await _json(request)
        return engine.get_document(doc_id).update_easel(easel_id, body["spec"]).to_dict()

    @app.post("/documents/{doc_id}/easels/{easel_id}/compile")
    def compile_easel(doc_id: str, easel_id: str):
        graph = engine.compile_easel(doc_id, easel_id)
        return {"graph": graph.to_obj(), "hash": graph.digest()}

    @app.post("/documents/{doc_id}/easels/{easel_id}/generate")
    def generate(doc_id: str, easel_id: str):
        return engine.generate(doc_id, easel_id)

    @app.post("/documents/{doc_id}/quick_op")
    async def quick_op(doc_id: str, request: Request):
        body = await _json(request)
        return engine.quick_op(
            doc_id,
            body["kind"],
            body["asset_id"],
            prompt=body.get("prompt"),
            page_id=body.get("page_id"),
            idem_key=body.get("idempotency_key"),
        )

    # --------------------------------------------------------------- jobs

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        return engine.gateway.get(job_id).to_dict()

    @app.post("/jobs/{job_id}/cancel")
    def job_cancel(job_id: str):
        return {"status": engine.gateway.cancel(job_id)}

    @app.post("/jobs/{job_id}/fetch_outputs")
    def job_fetch(job_id: str):
        return engine.fetch_outputs(job_id)

    @app.get("/jobs/{job_id}/events")
    def job_events(job_id: str):
        engine.gateway.get(job_id)

        def stream() -> Iterator[str]:
            for event in engine.gateway.watch(job_id, timeout=120.0):
                yield sse_frame(event.to_dict())
                if event.kind == "status" and event.status in TERMINAL:
                    return

        return StreamingResponse(stream(), media_type="text/event-stream", headers=SSE_HEADERS)

    # --------------------------------------------------------- provenance

    @app.get("/documents/{doc_id}/provenance/export")
    def provenance_export(doc_id: str):
        return engine.get_document(doc_id).provenance_export()

    @app.get("/documents/{doc_id}/provenance/{node_id}/lineage")
    def lineage(doc_id: str, node_id: str):
        return engine.get_document(doc_id).lineage_of(node_id)

    @app.get("/documents/{doc_id}/provenance/{node_id}/recreate")
    def recreate(doc_id: str, node_id: str):
        return {"params": engine.recreate(doc_id, node_id)}

    @app.get("/documents/{doc_id}/history")
    def history(doc_id: str, cursor: int = 0):
        return {"window": engine.get_document(doc_id).history_window(cursor)}

    @app.get("/documents/{doc_id}/trails")
    def trails(doc_id: str, bucket: float | None = None):
        bucket_s = bucket if bucket is not None else engine.config.trail_bucket_s
        return {"path": engine.get_document(doc_id).trail_path(bucket_s)}

    @app.get("/documents/{doc_id}/heatmap")
    def heatmap(doc_id: str):
        return {"weights": engine.get_document(doc_id).activity_heatmap()}

    @app.get("/documents/{doc_id}/timeline")
    def timeline(doc_id: str, width: float = 1000.0):
        return {"entries": engine.get_document(doc_id).timeline_layout(width)}

    @app.get("/documents/{doc_id}/search")
    def search(doc_id: str, q: str = ""):
        return {"results": engine.get_document(doc_id).search(q)}

    # ------------------------------------------------------- organization

    @app.post("/documents/{doc_id}/collections")
    async def create_collection(doc_id: str, request: Request):
        body = await _json(request)
        coll = engine.get_document(doc_id).create_collection(
            body["name"], body.get("asset_ids", []), body.get("tags", []), idem_key=body.get("idempotency_key")
        )
        return coll.to_dict()

    @app.get("/documents/{doc_id}/collections")
    def list_collections(doc_id: str):
        return {"collections": [c.to_dict() for c in engine.get_document(doc_id).collections.values()]}

    @app.post("/documents/{doc_id}/collections/{collection_id}/assets")
    async def add_to_collection(doc_id: str, collection_id: str, request: Request):
        body = await _json(request)
        return engine.get_document(doc_id).add_to_collection(collection_id, body["asset_id"]).to_dict()

    @app.post("/documents/{doc_id}/collections/{collection_id}/instantiate")
    async def instantiate(doc_id: str, collection_id: str, request: Request):
        body = await _json(request)
        item = engine.get_document(doc_id).instantiate_from_collection(
            collection_id, body["asset_id"], body["page_id"], tuple(body.get("position", (0.0, 0.0))),
            idem_key=body.get("idempotency_key"),
        )
        return item.to_dict()

    @app.post("/documents/{doc_id}/grid")
    async def grid(doc_id: str, request: Request):
        body = await _json(request)
        items = engine.pack_grid(doc_id, body["item_ids"], float(body.get("cell_gap", 16.0)), idem_key=body.get("idempotency_key"))
        return {"items": [i.to_dict() for i in items]}

    @app.post("/documents/{doc_id}/exhibit")
    async def exhibit_add(doc_id: str, request: Request):
        body = await _json(request)
        entry = engine.get_document(doc_id).exhibit_add(
            body["asset_id"], body.get("caption", ""), idem_key=body.get("idempotency_key")
        )
        return entry.to_dict()

    @app.get("/documents/{doc_id}/exhibit")
    def exhibit_list(doc_id: str):
        return {"entries": [e.to_dict() for e in engine.get_document(doc_id).exhibit]}

    @app.post("/documents/{doc_id}/exhibit/export")
    def exhibit_export(doc_id: str):
        return engine.export_exhibit(doc_id)

    @app.patch("/documents/{doc_id}/exhibit/{entry_id}")
    async def exhibit_update(doc_id: str, entry_id: str, request: Request):
        body = await _json(request)
        doc = engine.get_document(doc_id)
        if body.get("index") is not None:
            doc.exhibit_reorder(entry_id, int(body["index"]))
        if body.get("caption") is not None:
            doc.exhibit_caption(entry_id, body["caption"])
        entry = next(e for e in doc.exhibit if e.entry_id == entry_id)
        return entry.to_dict()

    return app


async def _json(request: Request) -> dict:
    try:
        return await request.json()
    except Exception:
        raise errors.ValidationError(["request body must be JSON"]) from None
