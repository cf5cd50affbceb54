"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line (run with -s to see them inline) and enforcing its stated
tolerance and runtime budget."""

import base64
import json
import random
import time

import httpx
import pytest
from corpus import build_corpus, fixture_specs, quick_op_fixtures, QUICK_OP_SEED
from specgen import optional_slots, random_spec, without_slot

from easelworks.blobstore import BlobStore
from easelworks.canonical import canonical_bytes
from easelworks.compiler import Compiler, map_details, map_preserve, map_structure_end
from easelworks.config import EngineConfig
from easelworks.demo import checker_image, gradient_image, rings_image
from easelworks.document import Document
from easelworks.easelspec import EaselSpec
from easelworks.engine import Engine
from easelworks.gateway import GenerationJob
from easelworks.ids import SequentialIds, TickingClock
from easelworks.mediainfo import write_png
from easelworks.remote import RemoteDriver
from easelworks.workflow import WorkflowGraph, is_edge

import numpy as np


def report(label: str, started: float, budget: float):
    elapsed = time.perf_counter() - started
    assert elapsed < budget, f"{label}: {elapsed:.2f}s exceeded budget {budget}s"
    print(f"ACCEPTANCE PASS: {label} ({elapsed:.2f}s < {budget}s)")


# 1 ------------------------------------------------------------------------

def test_criterion_slider_maps():
    t0 = time.perf_counter()
    assert map_details(0.0) == 0.0
    assert map_details(1.0) == -0.05
    rng = random.Random(1)
    for _ in range(1000):
        p = rng.random()
        assert map_preserve(p) == 1.0 - p
    report("slider maps exact (details endpoints, preserve complement x1000)", t0, 1.0)


# 2 ------------------------------------------------------------------------

def test_criterion_structure_end_percentages():
    t0 = time.perf_counter()
    assert map_structure_end("pose") == 0.9
    assert map_structure_end("depth") == 0.7
    assert map_structure_end("lineart") == 0.4
    report("structure end-percentages pose/depth/lineart", t0, 1.0)


# 3 ------------------------------------------------------------------------

def test_criterion_compiler_golden_files(tmp_path, golden_dir):
    t0 = time.perf_counter()
    corpus = build_corpus(tmp_path / "blobs")
    compiler = Compiler()
    count = 0
    for name, spec in fixture_specs(corpus).items():
        graph = compiler.compile(spec, corpus.resolve)
        assert graph.canonical() + b"\n" == (golden_dir / f"easel_{name}.json").read_bytes(), name
        count += 1
    for name, op_kind, asset_key, prompt in quick_op_fixtures(corpus):
        plan = compiler.compile_quick_op(
            op_kind, corpus.assets[asset_key], prompt, seed=QUICK_OP_SEED,
            resolve=corpus.resolve, blob_loader=corpus.blobs.get,
        )
        if plan.graph is not None:
            assert plan.graph.canonical() + b"\n" == (golden_dir / f"quick_{name}.json").read_bytes(), name
        else:
            assert canonical_bytes(plan.local) + b"\n" == (golden_dir / f"quick_{name}.local.json").read_bytes(), name
        count += 1

    draw_flux = json.loads((golden_dir / "easel_draw_flux_basic.json").read_text())
    steps = [n["inputs"]["steps"] for n in draw_flux["nodes"].values() if n["class_type"] == "BasicScheduler"]
    nags = [n["inputs"]["nag_scale"] for n in draw_flux["nodes"].values() if n["class_type"] == "NAGCFGGuider"]
    assert steps == [8] and nags == [9.0]
    wan_draw = json.loads((golden_dir / "easel_draw_wan22_basic.json").read_text())
    steps = [n["inputs"]["steps"] for n in wan_draw["nodes"].values() if n["class_type"] == "BasicScheduler"]
    nags = [n["inputs"]["nag_scale"] for n in wan_draw["nodes"].values() if n["class_type"] == "NAGCFGGuider"]
    assert steps == [20] and nags == [11.0]
    report(f"compiler golden files byte-equal ({count} fixtures incl. every quick op)", t0, 5.0)


# 4 ------------------------------------------------------------------------

def test_criterion_switch_strategy(tmp_path):
    t0 = time.perf_counter()
    corpus = build_corpus(tmp_path / "blobs")
    compiler = Compiler()
    rng = random.Random(12)
    checked = 0
    while checked < 500:
        spec = random_spec(rng, corpus)
        slots = optional_slots(spec)
        if not slots:
            continue
        base = compiler.compile(spec, corpus.resolve)
        for slot in slots:
            variant = compiler.compile(without_slot(spec, slot), corpus.resolve)
            assert set(base.nodes) == set(variant.nodes), f"{slot}: node sets differ"
            for nid in base.nodes:
                a, vb = base.nodes[nid], variant.nodes[nid]
                assert a["class_type"] == vb["class_type"]
                assert set(a["inputs"]) == set(vb["inputs"])
                for name, value in a["inputs"].items():
                    other = vb["inputs"][name]
                    if is_edge(value) or is_edge(other):
                        assert value == other, f"{slot}: edge {nid}.{name} rewired"
            checked += 1
    report(f"switch strategy: {checked} slot present/absent pairs, identical node sets", t0, 60.0)


# 5 ------------------------------------------------------------------------

class _SpecgenAdapter:
    """Gives specgen corpus-style access to an engine document."""

    def __init__(self, doc, keys):
        self.doc = doc
        self.keys = keys

    def a(self, key):
        return self.keys[key]

    def resolve(self, asset_id):
        return self.doc.assets.get(asset_id)


def _seeded_engine_doc(tmp_path, tag="acc"):
    cfg = EngineConfig(data_dir=str(tmp_path / f"data-{tag}"), fsync=False, snapshot_every=100_000)
    engine = Engine(cfg, rng=random.Random(5))
    doc = engine.create_document(tag)
    keys = {}
    payloads = {
        "forest": gradient_image(64, (24, 96, 40), (8, 32, 16)),
        "lake": gradient_image(64, (40, 80, 160), (200, 220, 255)),
        "dragon": rings_image(64, (168, 40, 40)),
        "warrior": checker_image(64, (180, 150, 90), (60, 50, 40)),
    }
    page = next(iter(doc.pages.values()))
    for key, payload in payloads.items():
        asset = engine.ingest(doc.doc_id, payload, "image")
        keys[key] = asset.asset_id
    engine.wait_idle()
    for key in payloads:
        doc.place_item(keys[key], page.page_id, (0.0, 0.0), (64.0, 64.0))
    mask = engine.ingest(doc.doc_id, write_png(np.full((64, 64, 4), 255, dtype=np.uint8)), "image")
    engine.wait_idle()
    keys["mask"] = mask.asset_id
    return engine, doc, page, keys


def test_criterion_recreate_round_trip(tmp_path):
    t0 = time.perf_counter()
    engine, doc, page, keys = _seeded_engine_doc(tmp_path)
    adapter = _SpecgenAdapter(doc, keys)
    rng = random.Random(77)
    run_ids = []
    for _ in range(200):
        spec = random_spec(rng, adapter)
        easel = doc.create_easel(page.page_id, spec.to_dict(), (0.0, 0.0))
        result = engine.generate(doc.doc_id, easel.easel_id)
        run_ids.append(result["run_id"])
    engine.wait_idle(timeout=120)
    verified = 0
    for run_id in run_ids:
        run = doc.runs[run_id]
        assert run.output_node_ids, f"run {run_id} produced no nodes"
        params = doc.recreate_params(run.output_node_ids[0])
        graph = engine.recompile_params(doc.doc_id, params)
        stored = engine.blobs.get(run.graph_blob)
        assert graph.canonical() == stored, f"round-trip drift for run {run_id}"
        verified += 1
    engine.close()
    report(f"recreate round-trip byte-equal over {verified} mock runs", t0, 30.0)


# 6 ------------------------------------------------------------------------

def test_criterion_provenance_invariants(tmp_path):
    t0 = time.perf_counter()
    blobs = BlobStore(tmp_path / "blobs")
    doc = Document("fuzz", blobs, idgen=SequentialIds("z"), clock=TickingClock(step=1.0))
    page = doc.create_page("p")
    payload = write_png(np.full((4, 4, 4), 7, dtype=np.uint8))
    blob = blobs.put(payload)
    rng = random.Random(2024)
    assets = []
    copies = []
    ops = 0
    while ops < 10_000:
        roll = rng.random()
        if roll < 0.15 or not assets:
            a = doc.ingest_asset(blob, "image", dims=(4, 4))
            doc.place_item(a.asset_id, page.page_id, (rng.random() * 500, rng.random() * 500), (4, 4))
            assets.append(a.asset_id)
            ops += 2
        elif roll < 0.3:
            item = doc.place_item(rng.choice(assets), page.page_id, (0, 0), (4, 4))
            copies.append(doc.node_for_item(item.item_id).node_id)
            ops += 1
        elif roll < 0.5:
            a = doc.ingest_asset(blob, "image", dims=(4, 4))
            parents = [(p, "reference_1") for p in rng.sample(assets, k=min(len(assets), rng.randint(1, 3)))]
            params = {"type": "easel", "spec": {"kind": "draw", "prompt": f"p{ops}", "seed": ops}}
            doc.record_generation(
                f"run{ops}", params,
                [{"asset_id": a.asset_id, "page_id": page.page_id, "position": (0, 0), "size": (4, 4)}],
                parents,
            )
            assets.append(a.asset_id)
            ops += 2
        elif roll < 0.7 and doc.items:
            doc.touch_item(rng.choice(list(doc.items)))
            ops += 1
        elif roll < 0.85 and doc.nodes:
            doc.soft_delete(rng.choice(list(doc.nodes)))
            ops += 1
        elif doc.nodes:
            doc.restore(rng.choice(list(doc.nodes)))
            ops += 1

    # acyclicity by Kahn's algorithm
    indeg = {nid: len(n.parents) for nid, n in doc.nodes.items()}
    children = {}
    for n in doc.nodes.values():
        for p, _r in n.parents:
            children.setdefault(p, []).append(n.node_id)
    frontier = [nid for nid, d in indeg.items() if d == 0]
    visited = 0
    while frontier:
        cur = frontier.pop()
        visited += 1
        for ch in children.get(cur, ()):
            indeg[ch] -= 1
            if indeg[ch] == 0:
                frontier.append(ch)
    assert visited == len(doc.nodes), "cycle detected"

    # no dangling references after the whole op sequence
    for item in doc.items.values():
        assert item.asset_id in doc.assets
    for n in doc.nodes.values():
        assert n.item_id in doc.items
        for p, _r in n.parents:
            assert p in doc.nodes

    # deleted nodes traversable + copies preserve params
    deleted = [n for n in doc.nodes.values() if n.deleted]
    assert deleted, "fuzz produced no deletions"
    for n in list(doc.nodes.values())[:200]:
        doc.lineage_of(n.node_id)
    for node_id in copies[:100]:
        node = doc.nodes[node_id]
        original = doc.nodes[node.node_kind["of"]]
        assert node.params_snapshot == original.params_snapshot

    # lineage equals BFS oracle on 50-node slice
    edges = [(n.node_id, p) for n in doc.nodes.values() for p, _r in n.parents]
    adj_up, adj_down = {}, {}
    for child, parent in edges:
        adj_up.setdefault(child, set()).add(parent)
        adj_down.setdefault(parent, set()).add(child)

    def reach(start, adj):
        seen, stack = set(), [start]
        while stack:
            for nxt in adj.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        seen.discard(start)
        return seen

    sample = rng.sample(list(doc.nodes), k=50)
    for node_id in sample:
        lineage = doc.lineage_of(node_id)
        assert {x["node_id"] for x in lineage["ancestors"]} == reach(node_id, adj_up)
        assert {x["node_id"] for x in lineage["descendants"]} == reach(node_id, adj_down)
    report(f"provenance invariants after {ops} fuzzed ops ({len(doc.nodes)} nodes)", t0, 60.0)


# 7 ------------------------------------------------------------------------

def test_criterion_history_window(tmp_path):
    t0 = time.perf_counter()
    blobs = BlobStore(tmp_path / "blobs")
    doc = Document("h", blobs, idgen=SequentialIds(), clock=TickingClock(step=5.0))
    page = doc.create_page("p")
    payload = write_png(np.full((4, 4, 4), 3, dtype=np.uint8))
    blob = blobs.put(payload)
    items = []
    for _ in range(12):
        a = doc.ingest_asset(blob, "image", dims=(4, 4))
        items.append(doc.place_item(a.asset_id, page.page_id, (0, 0), (4, 4)))
    for cursor in range(12):
        window = doc.history_window(cursor)
        assert len(window) == min(5, 12 - cursor), f"cursor {cursor}"
        expected = [i.item_id for i in items[cursor:cursor + 5]]
        assert [e["item_id"] for e in window] == expected
        stamps = [e["created_at"] for e in window]
        assert stamps == sorted(stamps)
    report("history window min(5, remaining) in created_at order, all cursors", t0, 1.0)


# 8 ------------------------------------------------------------------------

def test_criterion_heatmap_and_trails(tmp_path):
    t0 = time.perf_counter()
    blobs = BlobStore(tmp_path / "blobs")
    doc = Document("hm", blobs, idgen=SequentialIds(), clock=TickingClock(step=1.0))
    page = doc.create_page("p")
    blob = blobs.put(write_png(np.full((4, 4, 4), 9, dtype=np.uint8)))
    items = []
    for i in range(4):
        a = doc.ingest_asset(blob, "image", dims=(4, 4))
        items.append(doc.place_item(a.asset_id, page.page_id, (i * 40.0, i * 10.0), (20, 20)))
    for count, item in zip((2, 4, 8, 0), items):
        for _ in range(count):
            doc.touch_item(item.item_id)
    weights = doc.activity_heatmap()
    for expected, item in zip((0.25, 0.5, 1.0, 0.0), items):
        assert abs(weights[item.item_id] - expected) <= 1e-12

    # trails: fresh document, 100-event synthetic log vs centroid oracle
    import math

    doc = Document("trails", blobs, idgen=SequentialIds("t"), clock=TickingClock(step=1.0))
    page = doc.create_page("p")
    items = []
    for i in range(4):
        a = doc.ingest_asset(blob, "image", dims=(4, 4))
        items.append(doc.place_item(a.asset_id, page.page_id, (i * 40.0, i * 10.0), (20, 20)))
    rng = random.Random(31)
    bucket = 45.0
    log = []
    for _ in range(100):
        doc.clock.now += rng.random() * 30
        item = rng.choice(items)
        doc.touch_item(item.item_id)
        ts = doc.interactions[-1][0]
        log.append((ts, item.item_id, *item.center()))
    oracle_buckets = {}
    for ts, item_id, cx, cy in log:
        b = math.floor(ts / bucket)
        oracle_buckets.setdefault(b, {}).setdefault(item_id, (cx, cy))
    expected_path = [
        {
            "t": b * bucket,
            "x": sum(p[0] for p in pts.values()) / len(pts),
            "y": sum(p[1] for p in pts.values()) / len(pts),
        }
        for b, pts in sorted(oracle_buckets.items())
    ]
    assert doc.trail_path(bucket) == expected_path
    report("heatmap weights exact to 1e-12; trails match bucket-centroid oracle (100 events)", t0, 5.0)


# 9 ------------------------------------------------------------------------

def test_criterion_end_to_end_mock(tmp_path):
    t0 = time.perf_counter()
    engine, doc, page, keys = _seeded_engine_doc(tmp_path, tag="e2e")
    before = {a.asset_id for a in doc.assets.values()}

    # quick sketch from a text note
    note = engine.ingest(doc.doc_id, "a female warrior wearing a cape".encode(), "text")
    doc.place_item(note.asset_id, page.page_id, (500.0, 0.0), (200.0, 80.0))
    sketch_job = engine.quick_op(doc.doc_id, "quick_sketch", note.asset_id)
    engine.wait_idle()
    sketch_asset_id = engine.gateway.get(sketch_job["job_id"]).meta["result"]["assets"][0]["asset_id"]

    # paint with 2 references
    paint_easel = doc.create_easel(
        page.page_id,
        {
            "kind": "paint",
            "prompt": "a forest clearing at night",
            "references": [
                {"asset_id": keys["forest"], "strength": 1.0},
                {"asset_id": keys["lake"], "strength": 0.5},
            ],
            "seed": 7,
        },
        (0.0, 300.0),
    )
    paint_run = engine.generate(doc.doc_id, paint_easel.easel_id)
    engine.wait_idle()
    paint_out = engine.gateway.get(paint_run["job_id"]).meta["result"]["assets"][0]["asset_id"]

    # trace the paint output
    trace_easel = doc.create_easel(
        page.page_id,
        {
            "kind": "trace",
            "trace_source_prompt": "a woman in front of a lake",
            "trace_target_prompt": "a woman, painting style",
            "start_image": paint_out,
            "seed": 8,
        },
        (0.0, 900.0),
    )
    trace_run = engine.generate(doc.doc_id, trace_easel.easel_id)
    engine.wait_idle()

    # collage flatten: paint output over a fixture import
    collage = engine.flatten_collage(
        doc.doc_id,
        layers=[
            {"asset_id": keys["forest"], "x": 0, "y": 0, "z": 0},
            {"asset_id": paint_out, "x": 16, "y": 16, "scale": 0.05, "z": 1},
        ],
        rect={"x": 0, "y": 0, "w": 64, "h": 64},
        page_id=page.page_id,
    )
    collage_out = collage["asset"]["asset_id"]
    engine.wait_idle()

    # animate from the collage
    animate_easel = doc.create_easel(
        page.page_id,
        {"kind": "animate", "prompt": "slow pan across the scene", "first_frame": collage_out, "seed": 9},
        (600.0, 900.0),
    )
    animate_run = engine.generate(doc.doc_id, animate_easel.easel_id)
    engine.wait_idle()

    generated = [
        a for a in doc.assets.values()
        if a.asset_id not in before and a.origin["type"] in ("generated", "quick_op") and a.asset_id != note.asset_id
    ]
    assert len(generated) == 5, f"expected 5 generated assets, got {len(generated)}"

    def node_of(asset_id):
        return next(n for n in doc.nodes.values() if n.asset_id == asset_id and n.node_kind["type"] != "copy")

    assert [r for _p, r in node_of(sketch_asset_id).parents] == ["input_image"]
    assert sorted(r for _p, r in node_of(paint_out).parents) == ["reference_1", "reference_2"]
    trace_out = engine.gateway.get(trace_run["job_id"]).meta["result"]["assets"][0]["asset_id"]
    assert [r for _p, r in node_of(trace_out).parents] == ["input_image"]
    assert sorted(r for _p, r in node_of(collage_out).parents) == ["collage_layer", "collage_layer"]
    animate_out = engine.gateway.get(animate_run["job_id"]).meta["result"]["assets"][0]["asset_id"]
    assert [r for _p, r in node_of(animate_out).parents] == ["first_frame"]
    assert doc.assets[animate_out].kind == "video"

    # search by prompt keywords
    hits = {h["asset"]["asset_id"] for h in doc.search("clearing")}
    assert paint_out in hits
    hits = {h["asset"]["asset_id"] for h in doc.search("cape")}
    assert sketch_asset_id in hits

    # collection pull creates a copy node
    coll = doc.create_collection("keepers", [paint_out])
    pulled = doc.instantiate_from_collection(coll.collection_id, paint_out, page.page_id, (50.0, 50.0))
    pulled_node = doc.node_for_item(pulled.item_id)
    assert pulled_node.node_kind["type"] == "copy"
    assert pulled_node.parents == [(node_of(paint_out).node_id, "source")]
    engine.close()
    report("end-to-end mock flow: 5 generations, typed edges, search, collection copy", t0, 20.0)


# 10 -----------------------------------------------------------------------

def test_criterion_crash_recovery(tmp_path):
    t0 = time.perf_counter()
    for run in range(50):
        rng = random.Random(1000 + run)
        directory = tmp_path / f"doc{run}"
        blobs = BlobStore(tmp_path / f"blobs{run}")
        doc = Document("c", blobs, directory=directory, idgen=SequentialIds(), clock=TickingClock(), fsync=False,
                       snapshot_every=rng.choice([4, 10_000]))
        doc.create_page("p")
        blob = blobs.put(write_png(np.full((4, 4, 4), run % 256, dtype=np.uint8)))
        acked_by_seq = {doc.seq: json.dumps(doc.state_dict(), sort_keys=True)}
        for _ in range(rng.randint(2, 12)):
            roll = rng.random()
            if roll < 0.4 or not doc.assets:
                doc.ingest_asset(blob, "image", dims=(4, 4))
            elif roll < 0.7:
                doc.place_item(rng.choice(list(doc.assets)), next(iter(doc.pages)), (rng.random(), 0), (4, 4))
            elif doc.items:
                doc.touch_item(rng.choice(list(doc.items)))
            acked_by_seq[doc.seq] = json.dumps(doc.state_dict(), sort_keys=True)
        doc._journal_fh.flush()
        doc._journal_fh.close()
        doc._journal_fh = None

        journal = directory / "journal.jsonl"
        data = journal.read_bytes()
        lines = data.splitlines(keepends=True)
        # crash mid-append of the final record
        cut = rng.randrange(0, len(lines[-1]))
        torn_tail = lines[-1][:cut]
        journal.write_bytes(b"".join(lines[:-1]) + torn_tail)
        survivors = len(lines) - 1
        try:
            json.loads(torn_tail)
            survivors += 1  # only the newline was lost; the record is durable
        except ValueError:
            pass

        # a snapshot may already hold the torn mutation; recovery resumes
        # from whichever of (snapshot, complete journal tail) is newer
        snap_path = directory / "snapshot.json"
        snap_seq = json.loads(snap_path.read_text())["seq"] if snap_path.exists() else 0
        expected_seq = max(survivors, snap_seq)

        reloaded = Document.load("c", blobs, directory)
        expected = acked_by_seq[expected_seq]
        assert json.dumps(reloaded.state_dict(), sort_keys=True) == expected, f"run {run}"
    report("crash recovery: 50 randomized torn-tail reloads reproduce acknowledged state", t0, 30.0)


# 11 -----------------------------------------------------------------------

def test_criterion_wire_conformance(fixture_dir):
    t0 = time.perf_counter()
    capture = json.loads((fixture_dir / "wire" / "remote_session.json").read_text())
    graph = WorkflowGraph.from_obj(capture["graph"])
    payload = base64.b64decode(capture["input_blob_b64"])
    remaining = list(capture["exchanges"])

    def handler(request: httpx.Request) -> httpx.Response:
        assert remaining, "extra request beyond the recording"
        expected = remaining.pop(0)
        assert request.method == expected["request"]["method"]
        assert str(request.url) == expected["request"]["url"]
        assert request.content == base64.b64decode(expected["request"]["body_b64"]), "request byte drift"
        resp = expected["response"]
        return httpx.Response(resp["status"], content=base64.b64decode(resp["body_b64"]),
                              headers={"Content-Type": resp["content_type"]} if resp["content_type"] else {})

    driver = RemoteDriver(
        "http://backend.test",
        client_id="easelworks",
        blob_loader={capture["input_digest"]: payload}.__getitem__,
        transport=httpx.MockTransport(handler),
        poll_interval=0.0,
    )
    job = GenerationJob(job_id="j", run_id="r", graph=graph, meta={}, submitted_at=0.0)
    outputs = driver.execute(job, lambda p: None, lambda: False)
    assert not remaining and len(outputs) == 1
    report("wire conformance: remote driver bytes match recorded fixture", t0, 5.0)
