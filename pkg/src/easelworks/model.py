"""Domain entities.

Everything is JSON-representable: entities round-trip through `to_dict` /
`from_dict` for snapshots, the journal and the wire. Timestamps are epoch
seconds (float); positions and sizes are canvas units (1 unit = 1 px at
100% zoom).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

ORIGIN_IMPORTED = "imported"
ORIGIN_GENERATED = "generated"
ORIGIN_QUICK_OP = "quick_op"

NODE_ORIGINAL = "original"
NODE_COPY = "copy"
NODE_GENERATED = "generated"
NODE_QUICK_OP = "quick_op"

PARENT_ROLES = (
    "reference_1",
    "reference_2",
    "reference_3",
    "style",
    "structure",
    "start_image",
    "input_image",
    "first_frame",
    "last_frame",
    "collage_layer",
    "mask",
    "source",
)

CONTROL_MAP_KINDS = ("pose", "depth", "scribble", "lineart")


@dataclass
class Asset:
    asset_id: str
    kind: str
    blob: str
    created_at: float
    dims: tuple[int, int] | None = None
    duration: float | None = None
    caption: str | None = None
    control_maps: dict[str, str] = field(default_factory=dict)
    origin: dict[str, Any] = field(default_factory=lambda: {"type": ORIGIN_IMPORTED})

    def to_dict(self) -> dict:
        return {
            "asset_id": self.asset_id,
            "kind": self.kind,
            "blob": self.blob,
            "created_at": self.created_at,
            "dims": list(self.dims) if self.dims else None,
            "duration": self.duration,
            "caption": self.caption,
            "control_maps": dict(self.control_maps),
            "origin": dict(self.origin),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Asset":
        return cls(
            asset_id=d["asset_id"],
            kind=d["kind"],
            blob=d["blob"],
            created_at=d["created_at"],
            dims=tuple(d["dims"]) if d.get("dims") else None,
            duration=d.get("duration"),
            caption=d.get("caption"),
            control_maps=dict(d.get("control_maps") or {}),
            origin=dict(d.get("origin") or {"type": ORIGIN_IMPORTED}),
        )


@dataclass
class CanvasItem:
    item_id: str
    page_id: str
    asset_id: str | None
    position: tuple[float, float]
    size: tuple[float, float]
    z_order: int
    created_at: float
    emphasis: float = 1.0
    click_count: int = 0
    last_interaction_at: float = 0.0
    deleted: bool = False

    def center(self) -> tuple[float, float]:
        return (self.position[0] + self.size[0] / 2, self.position[1] + self.size[1] / 2)

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "page_id": self.page_id,
            "asset_id": self.asset_id,
            "position": list(self.position),
            "size": list(self.size),
            "z_order": self.z_order,
            "created_at": self.created_at,
            "emphasis": self.emphasis,
            "click_count": self.click_count,
            "last_interaction_at": self.last_interaction_at,
            "deleted": self.deleted,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CanvasItem":
        return cls(
            item_id=d["item_id"],
            page_id=d["page_id"],
            asset_id=d.get("asset_id"),
            position=tuple(d["position"]),
            size=tuple(d["size"]),
            z_order=d["z_order"],
            created_at=d["created_at"],
            emphasis=d.get("emphasis", 1.0),
            click_count=d.get("click_count", 0),
            last_interaction_at=d.get("last_interaction_at", d["created_at"]),
            deleted=d.get("deleted", False),
        )


@dataclass
class ProvenanceNode:
    node_id: str
    item_id: str
    asset_id: str | None
    node_kind: dict[str, Any]
    created_at: float
    parents: list[tuple[str, str]] = field(default_factory=list)  # (parent node_id, role)
    params_snapshot: dict | None = None
    deleted: bool = False
    last_interaction_at: float = 0.0
    click_count: int = 0

    def to_dict(self) -> dict:
        return {
            "node_id": self.node_id,
            "item_id": self.item_id,
            "asset_id": self.asset_id,
            "node_kind": dict(self.node_kind),
            "created_at": self.created_at,
            "parents": [list(p) for p in self.parents],
            "params_snapshot": self.params_snapshot,
            "deleted": self.deleted,
            "last_interaction_at": self.last_interaction_at,
            "click_count": self.click_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProvenanceNode":
        return cls(
            node_id=d["node_id"],
            item_id=d["item_id"],
            asset_id=d.get("asset_id"),
            node_kind=dict(d["node_kind"]),
            created_at=d["created_at"],
            parents=[tuple(p) for p in d.get("parents") or []],
            params_snapshot=d.get("params_snapshot"),
            deleted=d.get("deleted", False),
            last_interaction_at=d.get("last_interaction_at", d["created_at"]),
            click_count=d.get("click_count", 0),
        )


@dataclass
class Page:
    page_id: str
    name: str
    created_at: float

    def to_dict(self) -> dict:
        return {"page_id": self.page_id, "name": self.name, "created_at": self.created_at}

    @classmethod
    def from_dict(cls, d: dict) -> "Page":
        return cls(d["page_id"], d["name"], d["created_at"])


@dataclass
class Easel:
    easel_id: str
    page_id: str
    position: tuple[float, float]
    created_at: float
    spec: dict

    def to_dict(self) -> dict:
        return {
            "easel_id": self.easel_id,
            "page_id": self.page_id,
            "position": list(self.position),
            "created_at": self.created_at,
            "spec": self.spec,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Easel":
        return cls(d["easel_id"], d["page_id"], tuple(d["position"]), d["created_at"], d["spec"])


@dataclass
class Run:
    """One generation submission; the graph bytes live in the blob store."""

    run_id: str
    params: dict  # tagged: {"type": "easel"|"quick_op", ...}
    graph_blob: str
    graph_hash: str
    submitted_at: float
    output_node_ids: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "params": self.params,
            "graph_blob": self.graph_blob,
            "graph_hash": self.graph_hash,
            "submitted_at": self.submitted_at,
            "output_node_ids": list(self.output_node_ids),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Run":
        return cls(
            run_id=d["run_id"],
            params=d["params"],
            graph_blob=d["graph_blob"],
            graph_hash=d["graph_hash"],
            submitted_at=d["submitted_at"],
            output_node_ids=list(d.get("output_node_ids") or []),
        )


@dataclass
class Collection:
    collection_id: str
    name: str
    created_at: float
    tags: list[str] = field(default_factory=list)
    members: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "collection_id": self.collection_id,
            "name": self.name,
            "created_at": self.created_at,
            "tags": list(self.tags),
            "members": list(self.members),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Collection":
        return cls(d["collection_id"], d["name"], d["created_at"], list(d.get("tags") or []), list(d.get("members") or []))


@dataclass
class ExhibitEntry:
    entry_id: str
    asset_id: str
    created_at: float
    caption: str = ""

    def to_dict(self) -> dict:
        return {"entry_id": self.entry_id, "asset_id": self.asset_id, "created_at": self.created_at, "caption": self.caption}

    @classmethod
    def from_dict(cls, d: dict) -> "ExhibitEntry":
        return cls(d["entry_id"], d["asset_id"], d["created_at"], d.get("caption", ""))
