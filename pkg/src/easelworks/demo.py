"""Seed a demo document: deterministic synthetic media plus a little
history (easels, generations, a collection, exhibit entries, touches) so
UIs and end-to-end tests have something real to load."""

from __future__ import annotations

import numpy as np

from .document import Document
from .engine import Engine
from .mediainfo import write_png


def gradient_image(size: int, top: tuple, bottom: tuple) -> bytes:
    h = w = size
    t = np.linspace(0.0, 1.0, h)[:, None, None]
    arr = (np.asarray(top) * (1 - t) + np.asarray(bottom) * t).astype(np.uint8)
    rgb = np.broadcast_to(arr, (h, w, 3)).copy()
    rgba = np.dstack([rgb, np.full((h, w), 255, dtype=np.uint8)])
    return write_png(rgba)


def rings_image(size: int, color: tuple) -> bytes:
    y, x = np.mgrid[0:size, 0:size]
    d = np.hypot(x - size / 2, y - size / 2)
    band = ((d // 24) % 2 == 0)
    rgba = np.zeros((size, size, 4), dtype=np.uint8)
    rgba[band] = (*color, 255)
    rgba[~band] = (16, 16, 24, 255)
    return write_png(rgba)


def checker_image(size: int, a: tuple, b: tuple, cell: int = 32) -> bytes:
    y, x = np.mgrid[0:size, 0:size]
    mask = ((x // cell) + (y // cell)) % 2 == 0
    rgba = np.zeros((size, size, 4), dtype=np.uint8)
    rgba[mask] = (*a, 255)
    rgba[~mask] = (*b, 255)
    return write_png(rgba)


def seed_demo_document(engine: Engine, name: str = "demo") -> Document:
    doc = engine.create_document(name)
    page = next(iter(doc.pages.values()))

    forest = engine.ingest(doc.doc_id, gradient_image(512, (24, 96, 40), (8, 32, 16)), "image")
    lake = engine.ingest(doc.doc_id, gradient_image(512, (40, 80, 160), (200, 220, 255)), "image")
    dragon = engine.ingest(doc.doc_id, rings_image(512, (168, 40, 40)), "image")
    warrior = engine.ingest(doc.doc_id, checker_image(512, (180, 150, 90), (60, 50, 40)), "image")
    note = engine.ingest(doc.doc_id, "a female warrior wearing a cape".encode("utf-8"), "text")
    engine.wait_idle()  # captions + control maps

    items = {}
    for i, asset in enumerate((forest, lake, dragon, warrior, note)):
        items[asset.asset_id] = doc.place_item(
            asset.asset_id, page.page_id, (64.0 + i * 560.0, 64.0), (512.0, 512.0)
        )

    draw = doc.create_easel(
        page.page_id,
        {"kind": "draw", "backend_model": "flux", "prompt": "a forest with a clearing", "seed": 101},
        (64.0, 720.0),
    )
    paint = doc.create_easel(
        page.page_id,
        {
            "kind": "paint",
            "backend_model": "flux",
            "prompt": "a forest clearing at night",
            "negative_prompt": "blurry, washed out",
            "details": 0.4,
            "adherence": 0.7,
            "preserve": 0.0,
            "references": [
                {"asset_id": forest.asset_id, "strength": 1.0},
                {"asset_id": lake.asset_id, "strength": 0.6},
                {"asset_id": dragon.asset_id, "strength": 0.3},
            ],
            "structure": {"asset_id": forest.asset_id, "map_kind": "depth", "strength": 0.8},
            "seed": 202,
        },
        (700.0, 720.0),
    )
    engine.generate(doc.doc_id, draw.easel_id)
    engine.generate(doc.doc_id, paint.easel_id)
    engine.quick_op(doc.doc_id, "quick_sketch", note.asset_id)
    engine.wait_idle()

    characters = doc.create_collection("Characters", [warrior.asset_id], tags=["hero"])
    doc.add_to_collection(characters.collection_id, dragon.asset_id)
    for asset in (forest, lake, dragon, warrior):
        doc.exhibit_add(asset.asset_id, caption=f"frame {asset.asset_id[:6]}")
    for _ in range(3):
        doc.touch_item(items[forest.asset_id].item_id)
    doc.touch_item(items[dragon.asset_id].item_id)
    doc.write_snapshot()
    return doc
