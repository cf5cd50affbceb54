"""Canvas document: state, mutations, journal persistence and projections.

One Document is one project (pages, assets, items, provenance graph,
easels, runs, collections, exhibit). All mutations funnel through
`_commit`, which appends a fully-resolved record to the append-only
journal, applies it to in-memory state and notifies event subscribers.
Replaying the journal therefore reconstructs the exact state: records
carry the ids and timestamps they were created with.

Reads are served under the same lock; projections (history, trails,
heatmap, timeline, lineage) are pure functions of current state.
"""

from __future__ import annotations

import copy
import json
import logging
import math
import os
import threading
from pathlib import Path
from typing import Any, Callable, Iterable

from . import errors
from .blobstore import BlobStore
from .ids import Clock, IdGen, uuid_gen, wall_clock
from .model import (
    Asset,
    CanvasItem,
    Collection,
    Easel,
    ExhibitEntry,
    Page,
    ProvenanceNode,
    Run,
)
from .search import SearchIndex

logger = logging.getLogger(__name__)

SNAPSHOT_EVERY_DEFAULT = 200


def params_text(params: dict | None) -> str:
    """Searchable text carried by a generation's parameter snapshot."""
    if not params:
        return ""
    spec = params.get("spec", params)
    parts = [
        spec.get("prompt") or "",
        spec.get("negative_prompt") or "",
        spec.get("trace_source_prompt") or "",
        spec.get("trace_target_prompt") or "",
        " ".join(spec.get("prompt_pills") or []),
        params.get("prompt") or "" if spec is not params else "",
    ]
    return " ".join(p for p in parts if p)


class Document:
    def __init__(
        self,
        doc_id: str,
        blobs: BlobStore,
        directory: str | Path | None = None,
        name: str = "",
        idgen: IdGen = uuid_gen,
        clock: Clock = wall_clock,
        snapshot_every: int = SNAPSHOT_EVERY_DEFAULT,
        fsync: bool = True,
    ):
        self.doc_id = doc_id
        self.name = name or doc_id
        self.blobs = blobs
        self.idgen = idgen
        self.clock = clock
        self.snapshot_every = snapshot_every
        self.fsync = fsync
        self._lock = threading.RLock()
        self._subscribers: list[Callable[[dict], None]] = []

        self.seq = 0
        self.pages: dict[str, Page] = {}
        self.assets: dict[str, Asset] = {}
        self.items: dict[str, CanvasItem] = {}
        self.nodes: dict[str, ProvenanceNode] = {}
        self.easels: dict[str, Easel] = {}
        self.runs: dict[str, Run] = {}
        self.collections: dict[str, Collection] = {}
        self.exhibit: list[ExhibitEntry] = []
        self.interactions: list[tuple[float, str, float, float]] = []  # ts, item_id, cx, cy
        self.idem: dict[str, Any] = {}
        self.index = SearchIndex()

        self._dir = Path(directory) if directory else None
        self._journal_fh = None
        if self._dir:
            self._dir.mkdir(parents=True, exist_ok=True)
            self._journal_fh = open(self._journal_path(), "ab")

    # ------------------------------------------------------------ plumbing

    def _journal_path(self) -> Path:
        assert self._dir is not None
        return self._dir / "journal.jsonl"

    def _snapshot_path(self) -> Path:
        assert self._dir is not None
        return self._dir / "snapshot.json"

    def subscribe(self, fn: Callable[[dict], None]) -> Callable[[], None]:
        with self._lock:
            self._subscribers.append(fn)

        def unsubscribe():
            with self._lock:
                if fn in self._subscribers:
                    self._subscribers.remove(fn)

        return unsubscribe

    def _commit(self, op: str, data: dict, idem_key: str | None = None) -> Any:
        with self._lock:
            if idem_key is not None and idem_key in self.idem:
                return self._resolve_idem(self.idem[idem_key])
            record = {"seq": self.seq + 1, "ts": self.clock(), "op": op, "data": data}
            if idem_key is not None:
                record["idem"] = idem_key
            if self._journal_fh is not None:
                line = json.dumps(record, separators=(",", ":"), ensure_ascii=False) + "\n"
                self._journal_fh.write(line.encode("utf-8"))
                self._journal_fh.flush()
                if self.fsync:
                    os.fsync(self._journal_fh.fileno())
            result = self._apply(record)
            subscribers = list(self._subscribers)
        for fn in subscribers:
            try:
                fn(record)
            except Exception:
                logger.exception("event subscriber failed")
        if self._dir and self.seq % self.snapshot_every == 0:
            self.write_snapshot()
        return result

    def _apply(self, record: dict) -> Any:
        handler = getattr(self, "_apply_" + record["op"])
        result = handler(record["data"])
        self.seq = record["seq"]
        if record.get("idem") is not None:
            # the cache lives in snapshots, so it stores plain JSON; replays
            # re-resolve the live entity from current state
            jsonable = [r.to_dict() for r in result] if isinstance(result, list) else result.to_dict()
            self.idem[record["idem"]] = {"op": record["op"], "result": jsonable}
        return result

    def _resolve_idem(self, cached: dict) -> Any:
        op, result = cached["op"], cached["result"]
        if op in ("create_page",):
            return self.pages[result["page_id"]]
        if op in ("ingest_asset", "set_metadata"):
            return self.assets[result["asset_id"]]
        if op in ("place_item", "move_item", "touch_item", "set_emphasis"):
            return self.items[result["item_id"]]
        if op == "set_deleted":
            return self.nodes[result["node_id"]]
        if op in ("create_easel", "update_easel"):
            return self.easels[result["easel_id"]]
        if op == "record_run":
            return self.runs[result["run_id"]]
        if op == "record_generation":
            return [self.nodes[r["node_id"]] for r in result]
        if op in ("create_collection", "add_to_collection"):
            return self.collections[result["collection_id"]]
        if op == "apply_layout":
            return [self.items[r["item_id"]] for r in result]
        if op in ("exhibit_add", "exhibit_caption"):
            return next(e for e in self.exhibit if e.entry_id == result["entry_id"])
        if op == "exhibit_reorder":
            return list(self.exhibit)
        raise KeyError(f"no idempotency resolver for op {op}")

    def close(self) -> None:
        with self._lock:
            if self._dir:
                self.write_snapshot()
            if self._journal_fh is not None:
                self._journal_fh.close()
                self._journal_fh = None

    # --------------------------------------------------------- persistence

    def write_snapshot(self) -> None:
        with self._lock:
            snap = {"seq": self.seq, "name": self.name, "state": self.state_dict()}
            tmp = self._snapshot_path().with_suffix(".tmp")
            tmp.write_text(json.dumps(snap, separators=(",", ":"), ensure_ascii=False))
            os.replace(tmp, self._snapshot_path())

    def state_dict(self) -> dict:
        return {
            "pages": [p.to_dict() for p in self.pages.values()],
            "assets": [a.to_dict() for a in self.assets.values()],
            "items": [i.to_dict() for i in self.items.values()],
            "nodes": [n.to_dict() for n in self.nodes.values()],
            "easels": [e.to_dict() for e in self.easels.values()],
            "runs": [r.to_dict() for r in self.runs.values()],
            "collections": [c.to_dict() for c in self.collections.values()],
            "exhibit": [e.to_dict() for e in self.exhibit],
            "interactions": [list(t) for t in self.interactions],
            "idem": self.idem,
        }

    def _load_state(self, state: dict) -> None:
        self.pages = {p["page_id"]: Page.from_dict(p) for p in state.get("pages", [])}
        self.assets = {a["asset_id"]: Asset.from_dict(a) for a in state.get("assets", [])}
        self.items = {i["item_id"]: CanvasItem.from_dict(i) for i in state.get("items", [])}
        self.nodes = {n["node_id"]: ProvenanceNode.from_dict(n) for n in state.get("nodes", [])}
        self.easels = {e["easel_id"]: Easel.from_dict(e) for e in state.get("easels", [])}
        self.runs = {r["run_id"]: Run.from_dict(r) for r in state.get("runs", [])}
        self.collections = {c["collection_id"]: Collection.from_dict(c) for c in state.get("collections", [])}
        self.exhibit = [ExhibitEntry.from_dict(e) for e in state.get("exhibit", [])]
        self.interactions = [tuple(t) for t in state.get("interactions", [])]
        self.idem = dict(state.get("idem", {}))

    def _rebuild_index(self) -> None:
        self.index = SearchIndex()
        for asset in self.assets.values():
            if asset.caption:
                self.index.set_text(asset.asset_id, "caption", asset.caption)
        for node in self.nodes.values():
            if node.params_snapshot and node.asset_id:
                self.index.set_text(node.asset_id, "params", params_text(node.params_snapshot))

    @classmethod
    def load(
        cls,
        doc_id: str,
        blobs: BlobStore,
        directory: str | Path,
        idgen: IdGen = uuid_gen,
        clock: Clock = wall_clock,
        snapshot_every: int = SNAPSHOT_EVERY_DEFAULT,
        fsync: bool = True,
    ) -> "Document":
        """Replay latest snapshot plus journal tail. Tolerates a torn last line."""
        directory = Path(directory)
        doc = cls.__new__(cls)
        Document.__init__(doc, doc_id, blobs, None, doc_id, idgen, clock, snapshot_every, fsync)
        snap_seq = 0
        snap_path = directory / "snapshot.json"
        if snap_path.exists():
            snap = json.loads(snap_path.read_text())
            doc._load_state(snap["state"])
            doc.name = snap.get("name", doc_id)
            doc.seq = snap_seq = snap["seq"]
        journal = directory / "journal.jsonl"
        if journal.exists():
            with open(journal, "rb") as f:
                for raw in f:
                    try:
                        record = json.loads(raw.decode("utf-8"))
                    except (ValueError, UnicodeDecodeError):
                        break  # torn tail write: everything before it was acknowledged
                    if record["seq"] <= snap_seq:
                        continue
                    doc._apply(record)
        doc._rebuild_index()
        doc._dir = directory
        directory.mkdir(parents=True, exist_ok=True)
        doc._journal_fh = open(journal, "ab")
        return doc

    # ------------------------------------------------------------- helpers

    def _require_page(self, page_id: str) -> Page:
        page = self.pages.get(page_id)
        if page is None:
            raise errors.UnknownPage(f"page {page_id} not found")
        return page

    def _require_asset(self, asset_id: str) -> Asset:
        asset = self.assets.get(asset_id)
        if asset is None:
            raise errors.UnknownAsset(f"asset {asset_id} not found")
        return asset

    def _require_item(self, item_id: str) -> CanvasItem:
        item = self.items.get(item_id)
        if item is None:
            raise errors.UnknownItem(f"item {item_id} not found")
        return item

    def _require_node(self, node_id: str) -> ProvenanceNode:
        node = self.nodes.get(node_id)
        if node is None:
            raise errors.UnknownNode(f"node {node_id} not found")
        return node

    def origin_node_of_asset(self, asset_id: str) -> ProvenanceNode | None:
        """The asset's first node; copies and parent edges point here."""
        candidates = [n for n in self.nodes.values() if n.asset_id == asset_id]
        if not candidates:
            return None
        return min(candidates, key=lambda n: (n.created_at, n.node_id))

    def node_for_item(self, item_id: str) -> ProvenanceNode | None:
        for n in self.nodes.values():
            if n.item_id == item_id:
                return n
        return None

    def _next_z(self, page_id: str) -> int:
        zs = [i.z_order for i in self.items.values() if i.page_id == page_id]
        return (max(zs) + 1) if zs else 0

    # ----------------------------------------------------------- mutations

    def create_page(self, name: str, idem_key: str | None = None) -> Page:
        with self._lock:
            data = {"page_id": self.idgen(), "name": name, "ts": self.clock()}
            return self._commit("create_page", data, idem_key)

    def _apply_create_page(self, d: dict) -> Page:
        page = Page(d["page_id"], d["name"], d["ts"])
        self.pages[page.page_id] = page
        return page

    def ingest_asset(
        self,
        blob: str,
        kind: str,
        origin: dict | None = None,
        dims: tuple[int, int] | None = None,
        duration: float | None = None,
        caption: str | None = None,
        idem_key: str | None = None,
    ) -> Asset:
        """Register an already-stored blob as an asset (decode upstream)."""
        with self._lock:
            if not self.blobs.has(blob):
                raise errors.UnknownAsset(f"blob {blob} not in store")
            data = {
                "asset_id": self.idgen(),
                "kind": kind,
                "blob": blob,
                "dims": list(dims) if dims else None,
                "duration": duration,
                "caption": caption,
                "origin": origin or {"type": "imported"},
                "ts": self.clock(),
            }
            return self._commit("ingest_asset", data, idem_key)

    def _apply_ingest_asset(self, d: dict) -> Asset:
        asset = Asset(
            asset_id=d["asset_id"],
            kind=d["kind"],
            blob=d["blob"],
            created_at=d["ts"],
            dims=tuple(d["dims"]) if d.get("dims") else None,
            duration=d.get("duration"),
            caption=d.get("caption"),
            origin=d.get("origin") or {"type": "imported"},
        )
        self.assets[asset.asset_id] = asset
        if asset.caption:
            self.index.set_text(asset.asset_id, "caption", asset.caption)
        return asset

    def place_item(
        self,
        asset_id: str,
        page_id: str,
        position: tuple[float, float],
        size: tuple[float, float],
        idem_key: str | None = None,
    ) -> CanvasItem:
        """Put an asset on the canvas. Re-placing an existing asset records
        a copy node pointing at the asset's original node."""
        with self._lock:
            self._require_asset(asset_id)
            self._require_page(page_id)
            if size[0] <= 0 or size[1] <= 0:
                raise errors.NonPositiveSize(f"size must be positive, got {size}")
            origin_node = self.origin_node_of_asset(asset_id)
            if origin_node is not None:
                node_kind = {"type": "copy", "of": origin_node.node_id}
                parents = [[origin_node.node_id, "source"]]
                snapshot = copy.deepcopy(origin_node.params_snapshot)
            else:
                node_kind = {"type": "original"}
                parents = []
                snapshot = None
            data = {
                "item_id": self.idgen(),
                "asset_id": asset_id,
                "page_id": page_id,
                "position": list(position),
                "size": list(size),
                "z_order": self._next_z(page_id),
                "node": {
                    "node_id": self.idgen(),
                    "node_kind": node_kind,
                    "parents": parents,
                    "params_snapshot": snapshot,
                },
                "ts": self.clock(),
            }
            return self._commit("place_item", data, idem_key)

    def _apply_place_item(self, d: dict) -> CanvasItem:
        item = CanvasItem(
            item_id=d["item_id"],
            page_id=d["page_id"],
            asset_id=d["asset_id"],
            position=tuple(d["position"]),
            size=tuple(d["size"]),
            z_order=d["z_order"],
            created_at=d["ts"],
            last_interaction_at=d["ts"],
        )
        self.items[item.item_id] = item
        nd = d["node"]
        node = ProvenanceNode(
            node_id=nd["node_id"],
            item_id=item.item_id,
            asset_id=item.asset_id,
            node_kind=nd["node_kind"],
            created_at=d["ts"],
            parents=[tuple(p) for p in nd["parents"]],
            params_snapshot=nd["params_snapshot"],
            last_interaction_at=d["ts"],
        )
        self.nodes[node.node_id] = node
        if node.params_snapshot and node.asset_id:
            self.index.set_text(node.asset_id, "params", params_text(node.params_snapshot))
        return item

    def move_item(
        self,
        item_id: str,
        position: tuple[float, float] | None = None,
        size: tuple[float, float] | None = None,
        idem_key: str | None = None,
    ) -> CanvasItem:
        with self._lock:
            item = self._require_item(item_id)
            if size is not None and (size[0] <= 0 or size[1] <= 0):
                raise errors.NonPositiveSize(f"size must be positive, got {size}")
            data = {
                "item_id": item_id,
                "position": list(position) if position else list(item.position),
                "size": list(size) if size else list(item.size),
            }
            return self._commit("move_item", data, idem_key)

    def _apply_move_item(self, d: dict) -> CanvasItem:
        item = self.items[d["item_id"]]
        item.position = tuple(d["position"])
        item.size = tuple(d["size"])
        return item

    def touch_item(self, item_id: str, idem_key: str | None = None) -> CanvasItem:
        with self._lock:
            item = self._require_item(item_id)
            cx, cy = item.center()
            data = {"item_id": item_id, "ts": self.clock(), "center": [cx, cy]}
            return self._commit("touch_item", data, idem_key)

    def _apply_touch_item(self, d: dict) -> CanvasItem:
        item = self.items[d["item_id"]]
        item.click_count += 1
        item.last_interaction_at = max(item.last_interaction_at, d["ts"])
        node = self.node_for_item(item.item_id)
        if node is not None:
            node.click_count = item.click_count
            node.last_interaction_at = item.last_interaction_at
        self.interactions.append((d["ts"], item.item_id, d["center"][0], d["center"][1]))
        return item

    def set_emphasis(self, item_id: str, level: float, idem_key: str | None = None) -> CanvasItem:
        with self._lock:
            self._require_item(item_id)
            if not (0.0 <= level <= 1.0):
                raise errors.OutOfRange(f"emphasis must be in [0,1], got {level}")
            return self._commit("set_emphasis", {"item_id": item_id, "level": level}, idem_key)

    def _apply_set_emphasis(self, d: dict) -> CanvasItem:
        item = self.items[d["item_id"]]
        item.emphasis = d["level"]
        return item

    def soft_delete(self, node_id: str, idem_key: str | None = None) -> ProvenanceNode:
        with self._lock:
            self._require_node(node_id)
            return self._commit("set_deleted", {"node_id": node_id, "deleted": True}, idem_key)

    def restore(self, node_id: str, idem_key: str | None = None) -> ProvenanceNode:
        with self._lock:
            self._require_node(node_id)
            return self._commit("set_deleted", {"node_id": node_id, "deleted": False}, idem_key)

    def _apply_set_deleted(self, d: dict) -> ProvenanceNode:
        node = self.nodes[d["node_id"]]
        node.deleted = d["deleted"]
        item = self.items.get(node.item_id)
        if item is not None:
            item.deleted = d["deleted"]
        return node

    def create_easel(
        self,
        page_id: str,
        spec: dict,
        position: tuple[float, float],
        idem_key: str | None = None,
    ) -> Easel:
        with self._lock:
            self._require_page(page_id)
            data = {
                "easel_id": self.idgen(),
                "page_id": page_id,
                "position": list(position),
                "spec": spec,
                "ts": self.clock(),
            }
            return self._commit("create_easel", data, idem_key)

    def _apply_create_easel(self, d: dict) -> Easel:
        easel = Easel(d["easel_id"], d["page_id"], tuple(d["position"]), d["ts"], d["spec"])
        self.easels[easel.easel_id] = easel
        return easel

    def update_easel(self, easel_id: str, spec: dict, idem_key: str | None = None) -> Easel:
        with self._lock:
            if easel_id not in self.easels:
                raise errors.UnknownEasel(f"easel {easel_id} not found")
            return self._commit("update_easel", {"easel_id": easel_id, "spec": spec}, idem_key)

    def _apply_update_easel(self, d: dict) -> Easel:
        easel = self.easels[d["easel_id"]]
        easel.spec = d["spec"]
        return easel

    def record_run(self, run_id: str, params: dict, graph_blob: str, graph_hash: str) -> Run:
        with self._lock:
            data = {
                "run_id": run_id,
                "params": copy.deepcopy(params),
                "graph_blob": graph_blob,
                "graph_hash": graph_hash,
                "ts": self.clock(),
            }
            return self._commit("record_run", data)

    def _apply_record_run(self, d: dict) -> Run:
        run = Run(d["run_id"], d["params"], d["graph_blob"], d["graph_hash"], d["ts"])
        self.runs[run.run_id] = run
        return run

    def record_generation(
        self,
        run_id: str,
        params: dict,
        outputs: list[dict],
        parent_edges: list[tuple[str, str]],
        node_type: str = "generated",
        idem_key: str | None = None,
    ) -> list[ProvenanceNode]:
        """Create one provenance node (and canvas item) per output asset.

        `outputs`: [{asset_id, page_id, position, size}]; assets must already
        be ingested. `parent_edges`: (input asset_id, role); resolved to the
        inputs' original nodes now so later mutations cannot rewrite history.
        """
        with self._lock:
            resolved: list[list[str]] = []
            for asset_id, role in parent_edges:
                if asset_id not in self.assets:
                    raise errors.UnknownInputAsset(f"input asset {asset_id} not found")
                origin = self.origin_node_of_asset(asset_id)
                if origin is not None:
                    resolved.append([origin.node_id, role])
            outs = []
            for out in outputs:
                self._require_asset(out["asset_id"])
                self._require_page(out["page_id"])
                outs.append(
                    {
                        "asset_id": out["asset_id"],
                        "page_id": out["page_id"],
                        "position": list(out["position"]),
                        "size": list(out["size"]),
                        "z_order": self._next_z(out["page_id"]),
                        "item_id": self.idgen(),
                        "node_id": self.idgen(),
                    }
                )
            data = {
                "run_id": run_id,
                "params": copy.deepcopy(params),
                "node_type": node_type,
                "parents": resolved,
                "outputs": outs,
                "ts": self.clock(),
            }
            return self._commit("record_generation", data, idem_key)

    def _apply_record_generation(self, d: dict) -> list[ProvenanceNode]:
        nodes = []
        for out in d["outputs"]:
            item = CanvasItem(
                item_id=out["item_id"],
                page_id=out["page_id"],
                asset_id=out["asset_id"],
                position=tuple(out["position"]),
                size=tuple(out["size"]),
                z_order=out["z_order"],
                created_at=d["ts"],
                last_interaction_at=d["ts"],
            )
            self.items[item.item_id] = item
            node = ProvenanceNode(
                node_id=out["node_id"],
                item_id=out["item_id"],
                asset_id=out["asset_id"],
                node_kind={"type": d["node_type"], "run_id": d["run_id"]},
                created_at=d["ts"],
                parents=[tuple(p) for p in d["parents"]],
                params_snapshot=d["params"],
                last_interaction_at=d["ts"],
            )
            self.nodes[node.node_id] = node
            self.index.set_text(out["asset_id"], "params", params_text(d["params"]))
            nodes.append(node)
        run = self.runs.get(d["run_id"])
        if run is not None:
            run.output_node_ids = [n.node_id for n in nodes]
        return nodes

    def set_metadata(
        self,
        asset_id: str,
        caption: str | None,
        control_maps: dict[str, str] | None,
        idem_key: str | None = None,
    ) -> Asset:
        with self._lock:
            self._require_asset(asset_id)
            data = {
                "asset_id": asset_id,
                "caption": caption,
                "control_maps": dict(control_maps or {}),
                "ts": self.clock(),
            }
            return self._commit("set_metadata", data, idem_key)

    def _apply_set_metadata(self, d: dict) -> Asset:
        asset = self.assets[d["asset_id"]]
        if d["caption"] is not None:
            asset.caption = d["caption"]
            self.index.set_text(asset.asset_id, "caption", asset.caption)
        asset.control_maps.update(d["control_maps"])
        return asset

    def create_collection(
        self, name: str, asset_ids: Iterable[str] = (), tags: Iterable[str] = (), idem_key: str | None = None
    ) -> Collection:
        with self._lock:
            members = list(asset_ids)
            for a in members:
                self._require_asset(a)
            data = {
                "collection_id": self.idgen(),
                "name": name,
                "tags": list(tags),
                "members": members,
                "ts": self.clock(),
            }
            return self._commit("create_collection", data, idem_key)

    def _apply_create_collection(self, d: dict) -> Collection:
        coll = Collection(d["collection_id"], d["name"], d["ts"], d["tags"], d["members"])
        self.collections[coll.collection_id] = coll
        return coll

    def add_to_collection(self, collection_id: str, asset_id: str, idem_key: str | None = None) -> Collection:
        with self._lock:
            if collection_id not in self.collections:
                raise errors.UnknownCollection(f"collection {collection_id} not found")
            self._require_asset(asset_id)
            return self._commit("add_to_collection", {"collection_id": collection_id, "asset_id": asset_id}, idem_key)

    def _apply_add_to_collection(self, d: dict) -> Collection:
        coll = self.collections[d["collection_id"]]
        if d["asset_id"] not in coll.members:
            coll.members.append(d["asset_id"])
        return coll

    def instantiate_from_collection(
        self,
        collection_id: str,
        asset_id: str,
        page_id: str,
        position: tuple[float, float],
        idem_key: str | None = None,
    ) -> CanvasItem:
        """Pull a saved asset onto a page; records a copy node."""
        with self._lock:
            coll = self.collections.get(collection_id)
            if coll is None:
                raise errors.UnknownCollection(f"collection {collection_id} not found")
            if asset_id not in coll.members:
                raise errors.NotAMember(f"asset {asset_id} is not in collection {coll.name}")
            asset = self._require_asset(asset_id)
            size = asset.dims if asset.dims else (200.0, 200.0)
            return self.place_item(asset_id, page_id, position, (float(size[0]), float(size[1])), idem_key)

    def apply_layout(self, moves: dict[str, tuple[float, float]], idem_key: str | None = None) -> list[CanvasItem]:
        with self._lock:
            for item_id in moves:
                self._require_item(item_id)
            data = {"moves": [[iid, list(pos)] for iid, pos in sorted(moves.items())]}
            return self._commit("apply_layout", data, idem_key)

    def _apply_apply_layout(self, d: dict) -> list[CanvasItem]:
        out = []
        for item_id, pos in d["moves"]:
            item = self.items[item_id]
            item.position = tuple(pos)
            out.append(item)
        return out

    def exhibit_add(self, asset_id: str, caption: str = "", idem_key: str | None = None) -> ExhibitEntry:
        with self._lock:
            self._require_asset(asset_id)
            data = {"entry_id": self.idgen(), "asset_id": asset_id, "caption": caption, "ts": self.clock()}
            return self._commit("exhibit_add", data, idem_key)

    def _apply_exhibit_add(self, d: dict) -> ExhibitEntry:
        entry = ExhibitEntry(d["entry_id"], d["asset_id"], d["ts"], d["caption"])
        self.exhibit.append(entry)
        return entry

    def exhibit_reorder(self, entry_id: str, new_index: int, idem_key: str | None = None) -> list[ExhibitEntry]:
        with self._lock:
            if not any(e.entry_id == entry_id for e in self.exhibit):
                raise errors.UnknownEntry(f"exhibit entry {entry_id} not found")
            if not (0 <= new_index < len(self.exhibit)):
                raise errors.BadIndex(f"index {new_index} out of range 0..{len(self.exhibit) - 1}")
            return self._commit("exhibit_reorder", {"entry_id": entry_id, "index": new_index}, idem_key)

    def _apply_exhibit_reorder(self, d: dict) -> list[ExhibitEntry]:
        entry = next(e for e in self.exhibit if e.entry_id == d["entry_id"])
        self.exhibit.remove(entry)
        self.exhibit.insert(d["index"], entry)
        return list(self.exhibit)

    def exhibit_caption(self, entry_id: str, caption: str, idem_key: str | None = None) -> ExhibitEntry:
        with self._lock:
            if not any(e.entry_id == entry_id for e in self.exhibit):
                raise errors.UnknownEntry(f"exhibit entry {entry_id} not found")
            return self._commit("exhibit_caption", {"entry_id": entry_id, "caption": caption}, idem_key)

    def _apply_exhibit_caption(self, d: dict) -> ExhibitEntry:
        entry = next(e for e in self.exhibit if e.entry_id == d["entry_id"])
        entry.caption = d["caption"]
        return entry

    # --------------------------------------------------------- projections

    def lineage_of(self, node_id: str) -> dict:
        """Transitive ancestors and descendants with typed edges.

        Deleted nodes are traversed and reported; order is (created_at, id).
        """
        with self._lock:
            self._require_node(node_id)
            children: dict[str, list[tuple[str, str]]] = {}
            for n in self.nodes.values():
                for parent_id, role in n.parents:
                    children.setdefault(parent_id, []).append((n.node_id, role))

            def closure(start: str, expand) -> tuple[list[str], list[tuple[str, str, str]]]:
                seen: set[str] = set()
                edges: list[tuple[str, str, str]] = []
                frontier = [start]
                while frontier:
                    cur = frontier.pop()
                    for nxt, edge in expand(cur):
                        edges.append(edge)
                        if nxt not in seen and nxt != start:
                            seen.add(nxt)
                            frontier.append(nxt)
                ordered = sorted(seen, key=lambda nid: (self.nodes[nid].created_at, nid))
                return ordered, sorted(set(edges))

            def up(nid: str):
                for parent_id, role in self.nodes[nid].parents:
                    yield parent_id, (nid, parent_id, role)

            def down(nid: str):
                for child_id, role in children.get(nid, []):
                    yield child_id, (child_id, nid, role)

            ancestors, up_edges = closure(node_id, up)
            descendants, down_edges = closure(node_id, down)
            return {
                "node_id": node_id,
                "ancestors": [self.nodes[n].to_dict() for n in ancestors],
                "descendants": [self.nodes[n].to_dict() for n in descendants],
                "edges": [list(e) for e in sorted(set(up_edges) | set(down_edges))],
            }

    def recreate_params(self, node_id: str) -> dict:
        """Frozen generation parameters of a generated/quick-op node (copies
        inherit the original's)."""
        with self._lock:
            node = self._require_node(node_id)
            kind = node.node_kind.get("type")
            if kind not in ("generated", "quick_op", "copy") or node.params_snapshot is None:
                raise errors.NotAGeneratedNode(f"node {node_id} has no generation parameters")
            return copy.deepcopy(node.params_snapshot)

    def visible_items_chrono(self) -> list[CanvasItem]:
        items = [i for i in self.items.values() if not i.deleted]
        items.sort(key=lambda i: (i.created_at, i.item_id))
        return items

    def history_window(self, cursor: int, window: int = 5) -> list[dict]:
        with self._lock:
            items = self.visible_items_chrono()
            if not (0 <= cursor < len(items)) and not (cursor == 0 and not items):
                raise errors.CursorOutOfRange(f"cursor {cursor} outside [0, {len(items)})")
            out = []
            for item in items[cursor:cursor + window]:
                out.append(
                    {
                        "item_id": item.item_id,
                        "created_at": item.created_at,
                        "position": list(item.position),
                        "size": list(item.size),
                        "page_id": item.page_id,
                        "asset_id": item.asset_id,
                    }
                )
            return out

    def trail_path(self, bucket_s: float) -> list[dict]:
        """Engagement centroids per time bucket, ordered by time.

        Within a bucket each distinct item counts once (its logged center at
        first interaction in the bucket); empty buckets are omitted.
        """
        with self._lock:
            if bucket_s <= 0:
                raise errors.OutOfRange("bucket must be positive")
            buckets: dict[int, dict[str, tuple[float, float]]] = {}
            for ts, item_id, cx, cy in self.interactions:
                b = math.floor(ts / bucket_s)
                buckets.setdefault(b, {})
                if item_id not in buckets[b]:
                    buckets[b][item_id] = (cx, cy)
            path = []
            for b in sorted(buckets):
                pts = list(buckets[b].values())
                path.append(
                    {
                        "t": b * bucket_s,
                        "x": sum(p[0] for p in pts) / len(pts),
                        "y": sum(p[1] for p in pts) / len(pts),
                    }
                )
            return path

    def activity_heatmap(self) -> dict[str, float]:
        with self._lock:
            live = [i for i in self.items.values() if not i.deleted]
            peak = max((i.click_count for i in live), default=0)
            if peak == 0:
                return {i.item_id: 0.0 for i in live}
            return {i.item_id: i.click_count / peak for i in live}

    def timeline_layout(self, axis_width: float) -> list[dict]:
        with self._lock:
            live = [n for n in self.nodes.values() if not n.deleted]
            if not live:
                raise errors.EmptyCanvas("no items on canvas")
            live.sort(key=lambda n: (n.created_at, n.node_id))
            t0 = live[0].created_at
            t1 = live[-1].created_at
            children: dict[str, list[str]] = {}
            for n in live:
                for parent_id, _role in n.parents:
                    children.setdefault(parent_id, []).append(n.item_id)
            out = []
            for n in live:
                if t1 == t0:
                    x = axis_width / 2
                else:
                    x = (n.created_at - t0) / (t1 - t0) * axis_width
                parents = [
                    self.nodes[p].item_id for p, _r in n.parents if p in self.nodes and not self.nodes[p].deleted
                ]
                out.append(
                    {
                        "item_id": n.item_id,
                        "node_id": n.node_id,
                        "asset_id": n.asset_id,
                        "created_at": n.created_at,
                        "x": x,
                        "related": {"parents": parents, "children": children.get(n.node_id, [])},
                    }
                )
            return out

    def provenance_export(self) -> dict:
        """Full DAG as an adjacency document for UI panels."""
        with self._lock:
            return {
                "nodes": [n.to_dict() for n in sorted(self.nodes.values(), key=lambda n: (n.created_at, n.node_id))],
                "edges": [
                    [n.node_id, parent_id, role]
                    for n in self.nodes.values()
                    for parent_id, role in n.parents
                ],
            }

    def search(self, query: str) -> list[dict]:
        with self._lock:
            results = []
            for asset_id, score in self.index.query(query):
                asset = self.assets.get(asset_id)
                if asset is not None:
                    results.append({"asset": asset.to_dict(), "score": score})
            return results
