"""Deterministic fixture corpus shared by tests and the golden generator.

Everything here is byte-stable: synthetic payloads, sequential ids, a
ticking clock. Blob hashes are pure functions of payload bytes, so the
compiled fixture graphs (which embed blob hashes) are stable too.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from easelworks.blobstore import BlobStore
from easelworks.demo import checker_image, gradient_image, rings_image
from easelworks.document import Document
from easelworks.easelspec import EaselSpec, Reference, Structure
from easelworks.ids import SequentialIds, TickingClock
from easelworks.mediainfo import decode_payload, load_image_rgba, write_png
from easelworks.model import Asset
from easelworks.raster import control_map_arrays, rasterize_strokes


@dataclass
class Corpus:
    blobs: BlobStore
    doc: Document
    page_id: str
    assets: dict[str, Asset] = field(default_factory=dict)

    def resolve(self, asset_id):
        return self.doc.assets.get(asset_id)

    def a(self, key: str) -> str:
        return self.assets[key].asset_id


def _payloads() -> dict[str, bytes]:
    return {
        "forest": gradient_image(256, (24, 96, 40), (8, 32, 16)),
        "lake": gradient_image(256, (40, 80, 160), (200, 220, 255)),
        "dragon": rings_image(256, (168, 40, 40)),
        "warrior": checker_image(256, (180, 150, 90), (60, 50, 40)),
    }


def build_corpus(blob_dir) -> Corpus:
    blobs = BlobStore(blob_dir)
    doc = Document(
        "fixturedoc",
        blobs,
        directory=None,
        idgen=SequentialIds("f"),
        clock=TickingClock(start=1_700_000_000.0, step=7.0),
    )
    page = doc.create_page("fixtures")
    corpus = Corpus(blobs=blobs, doc=doc, page_id=page.page_id)

    for key, payload in _payloads().items():
        info = decode_payload(payload, "image")
        blob = blobs.put(payload)
        asset = doc.ingest_asset(blob, "image", dims=info.dims)
        maps = {}
        for map_kind, arr in control_map_arrays(load_image_rgba(payload)).items():
            maps[map_kind] = blobs.put(write_png(arr))
        doc.set_metadata(asset.asset_id, f"fixture {key} scene", maps)
        doc.place_item(asset.asset_id, page.page_id, (64.0, 64.0), (256.0, 256.0))
        corpus.assets[key] = doc.assets[asset.asset_id]

    # an image with no precomputed maps (stencil falls back to the workflow)
    bare_payload = gradient_image(128, (250, 240, 230), (30, 20, 10))
    bare = doc.ingest_asset(blobs.put(bare_payload), "image", dims=(128, 128))
    doc.place_item(bare.asset_id, page.page_id, (900.0, 64.0), (128.0, 128.0))
    corpus.assets["bare"] = doc.assets[bare.asset_id]

    mask_png = write_png(
        rasterize_strokes(
            [{"points": [[16.0, 64.0], [112.0, 64.0]], "width": 48.0, "color": "#ffffff"}], 128, 128
        )
    )
    mask = doc.ingest_asset(blobs.put(mask_png), "image", dims=(128, 128))
    corpus.assets["mask"] = doc.assets[mask.asset_id]

    note_payload = "a cat drawn in charcoal".encode("utf-8")
    note = doc.ingest_asset(blobs.put(note_payload), "text", caption="a cat drawn in charcoal")
    doc.place_item(note.asset_id, page.page_id, (64.0, 400.0), (200.0, 80.0))
    corpus.assets["note"] = doc.assets[note.asset_id]
    return corpus


def fixture_specs(corpus: Corpus) -> dict[str, EaselSpec]:
    """One spec per easel kind per backend variant (the golden set)."""
    a = corpus.a
    return {
        "draw_flux_basic": EaselSpec(kind="draw", backend_model="flux", prompt="a forest with a clearing", seed=11),
        "draw_flux_full": EaselSpec(
            kind="draw",
            backend_model="flux",
            prompt="an overgrown ruin at dusk",
            negative_prompt="text, watermark",
            style_presets=[("Dreamlight", 0.8), ("Anime", 0.35)],
            details=0.5,
            adherence=0.25,
            preserve=0.3,
            start_image=a("forest"),
            seed=12,
        ),
        "draw_sdxl_basic": EaselSpec(
            kind="draw", backend_model="sdxl", prompt="a lighthouse in a storm",
            style_presets=[("Realism", 1.0)], adherence=0.75, seed=13,
        ),
        "draw_wan22_basic": EaselSpec(
            kind="draw", backend_model="wan22", prompt="a portrait of a fencer mid-lunge",
            negative_prompt="blurry", adherence=1.0, details=0.2, seed=14,
        ),
        "paint_flux_full": EaselSpec(
            kind="paint",
            backend_model="flux",
            prompt="a forest clearing at night",
            negative_prompt="washed out",
            references=[
                Reference(a("forest"), 1.0),
                Reference(a("lake"), 0.6, mask_asset_id=a("mask")),
                Reference(a("dragon"), 0.3),
            ],
            structure=Structure(a("forest"), "depth", 0.8),
            details=0.4,
            adherence=0.7,
            seed=15,
        ),
        "paint_flux_uso": EaselSpec(
            kind="paint",
            backend_model="flux",
            prompt="the same scene, oil painting style",
            references=[Reference(a("warrior"), 0.9)],
            style_reference=a("dragon"),
            seed=16,
        ),
        "trace_flux_basic": EaselSpec(
            kind="trace",
            backend_model="flux",
            trace_source_prompt="a woman wearing a red cape in front of a lake",
            trace_target_prompt="a woman wearing a red cape, painting style",
            start_image=a("lake"),
            retrace_range=(0.2, 0.8),
            details=0.6,
            seed=17,
        ),
        "trace_flux_uso": EaselSpec(
            kind="trace",
            backend_model="flux",
            trace_source_prompt="a gray dragon sketch",
            trace_target_prompt="a gray dragon, matte painting",
            start_image=a("dragon"),
            style_reference=a("forest"),
            structure=Structure(a("dragon"), "lineart", 0.5),
            retrace_range=(0.0, 0.5),
            seed=18,
        ),
        "trace_wan22_basic": EaselSpec(
            kind="trace",
            backend_model="wan22",
            trace_source_prompt="a checkerboard floor",
            trace_target_prompt="a marble floor",
            start_image=a("warrior"),
            retrace_range=(0.25, 1.0),
            adherence=0.5,
            seed=19,
        ),
        "modify_flux_pills": EaselSpec(
            kind="modify",
            backend_model="flux",
            prompt="make it feel colder",
            prompt_pills=["low angle shot", "cool blue lighting"],
            aspect_ratio="16:9",
            start_image=a("forest"),
            seed=20,
        ),
        "animate_wan22_first": EaselSpec(
            kind="animate", backend_model="wan22", prompt="the camera drifts forward",
            first_frame=a("forest"), seed=21,
        ),
        "animate_wan22_both": EaselSpec(
            kind="animate",
            backend_model="wan22",
            prompt="a slow transition between the frames",
            prompt_pills=["slow push in"],
            first_frame=a("forest"),
            last_frame=a("dragon"),
            seed=22,
        ),
        "animate_wan22_text_only": EaselSpec(
            kind="animate", backend_model="wan22", prompt="waves rolling onto a beach at dawn", seed=23,
        ),
    }


def quick_op_fixtures(corpus: Corpus) -> list[tuple[str, str, str, str | None]]:
    """(golden name, op kind, corpus asset key, prompt)."""
    return [
        ("quick_sketch", "quick_sketch", "note", None),
        ("remove_background", "remove_background", "warrior", None),
        ("extract_element", "extract_element", "forest", "the blue flower"),
        ("palette", "palette", "dragon", None),
        ("stencil_graph", "stencil", "bare", None),
        ("revision", "revision", "warrior", "give the bunny a mustache"),
        ("upscale", "upscale", "lake", None),
        ("blend", "blend", "dragon", None),
        ("extend", "extend", "forest", None),
        ("view", "view", "warrior", None),
        ("quick_animate", "quick_animate", "lake", None),
        ("sculpt", "sculpt", "dragon", None),
    ]


QUICK_OP_SEED = 4242
