"""Document state machine: ops, journal persistence, crash tolerance."""

import copy
import json
import random

import pytest

from easelworks import errors
from easelworks.blobstore import BlobStore
from easelworks.document import Document
from easelworks.ids import SequentialIds, TickingClock
from easelworks.mediainfo import write_png

import numpy as np


def make_doc(tmp_path, directory=None, fsync=False):
    blobs = BlobStore(tmp_path / "blobs")
    return Document(
        "doc1",
        blobs,
        directory=directory,
        idgen=SequentialIds("x"),
        clock=TickingClock(step=2.0),
        fsync=fsync,
        snapshot_every=10_000,
    ), blobs


def add_image_asset(doc, blobs, shade=128):
    payload = write_png(np.full((8, 8, 4), shade, dtype=np.uint8))
    return doc.ingest_asset(blobs.put(payload), "image", dims=(8, 8))


def test_place_item_new_top_z(tmp_path):
    doc, blobs = make_doc(tmp_path)
    page = doc.create_page("p")
    a = add_image_asset(doc, blobs)
    b = add_image_asset(doc, blobs, 50)
    i1 = doc.place_item(a.asset_id, page.page_id, (0, 0), (10, 10))
    i2 = doc.place_item(b.asset_id, page.page_id, (5, 5), (10, 10))
    assert i2.z_order > i1.z_order
    assert i1.emphasis == 1.0 and i1.click_count == 0


def test_second_placement_creates_copy_node(tmp_path):
    doc, blobs = make_doc(tmp_path)
    page = doc.create_page("p")
    a = add_image_asset(doc, blobs)
    i1 = doc.place_item(a.asset_id, page.page_id, (0, 0), (10, 10))
    i2 = doc.place_item(a.asset_id, page.page_id, (40, 0), (10, 10))
    n1 = doc.node_for_item(i1.item_id)
    n2 = doc.node_for_item(i2.item_id)
    assert n1.node_kind["type"] == "original"
    assert n2.node_kind["type"] == "copy"
    assert n2.node_kind["of"] == n1.node_id
    assert n2.parents == [(n1.node_id, "source")]


def test_copy_of_generated_inherits_params(tmp_path):
    doc, blobs = make_doc(tmp_path)
    page = doc.create_page("p")
    a = add_image_asset(doc, blobs)
    params = {"type": "easel", "spec": {"kind": "draw", "prompt": "x", "seed": 4}}
    doc.record_run("r1", params, None, None)
    nodes = doc.record_generation(
        "r1", params, [{"asset_id": a.asset_id, "page_id": page.page_id, "position": (0, 0), "size": (10, 10)}], []
    )
    copy_item = doc.place_item(a.asset_id, page.page_id, (50, 0), (10, 10))
    copy_node = doc.node_for_item(copy_item.item_id)
    assert copy_node.params_snapshot == params
    assert doc.recreate_params(copy_node.node_id) == params
    assert doc.recreate_params(nodes[0].node_id) == params


def test_params_snapshot_frozen_against_later_edits(tmp_path):
    doc, blobs = make_doc(tmp_path)
    page = doc.create_page("p")
    a = add_image_asset(doc, blobs)
    params = {"type": "easel", "spec": {"kind": "draw", "prompt": "before", "seed": 1}}
    nodes = doc.record_generation(
        "r1", params, [{"asset_id": a.asset_id, "page_id": page.page_id, "position": (0, 0), "size": (1, 1)}], []
    )
    params["spec"]["prompt"] = "after"  # caller mutates its copy
    assert doc.recreate_params(nodes[0].node_id)["spec"]["prompt"] == "before"


def test_place_errors(tmp_path):
    doc, blobs = make_doc(tmp_path)
    page = doc.create_page("p")
    a = add_image_asset(doc, blobs)
    with pytest.raises(errors.UnknownAsset):
        doc.place_item("ghost", page.page_id, (0, 0), (1, 1))
    with pytest.raises(errors.NonPositiveSize):
        doc.place_item(a.asset_id, page.page_id, (0, 0), (0, 10))


def test_touch_and_emphasis(tmp_path):
    doc, blobs = make_doc(tmp_path)
    page = doc.create_page("p")
    a = add_image_asset(doc, blobs)
    item = doc.place_item(a.asset_id, page.page_id, (0, 0), (10, 10))
    t0 = item.last_interaction_at
    for expected in range(1, 8):
        item = doc.touch_item(item.item_id)
        assert item.click_count == expected
    assert item.last_interaction_at > t0
    node = doc.node_for_item(item.item_id)
    assert node.click_count == 7

    doc.set_emphasis(item.item_id, 0.3)
    assert doc.items[item.item_id].emphasis == 0.3
    with pytest.raises(errors.OutOfRange):
        doc.set_emphasis(item.item_id, 1.5)
    with pytest.raises(errors.UnknownItem):
        doc.touch_item("ghost")


def test_record_generation_unknown_input(tmp_path):
    doc, blobs = make_doc(tmp_path)
    page = doc.create_page("p")
    a = add_image_asset(doc, blobs)
    with pytest.raises(errors.UnknownInputAsset):
        doc.record_generation(
            "r", {}, [{"asset_id": a.asset_id, "page_id": page.page_id, "position": (0, 0), "size": (1, 1)}],
            [("ghost", "reference_1")],
        )


def test_soft_delete_restore_idempotent(tmp_path):
    doc, blobs = make_doc(tmp_path)
    page = doc.create_page("p")
    a = add_image_asset(doc, blobs)
    item = doc.place_item(a.asset_id, page.page_id, (7, 9), (10, 10))
    node = doc.node_for_item(item.item_id)
    doc.soft_delete(node.node_id)
    doc.soft_delete(node.node_id)  # idempotent
    assert doc.items[item.item_id].deleted
    assert doc.nodes[node.node_id].deleted
    doc.restore(node.node_id)
    restored = doc.items[item.item_id]
    assert not restored.deleted
    assert restored.position == (7, 9)  # geometry preserved


def test_idempotency_key_replays_result(tmp_path):
    doc, blobs = make_doc(tmp_path)
    doc.create_page("p")
    a = add_image_asset(doc, blobs)
    page_id = next(iter(doc.pages))
    i1 = doc.place_item(a.asset_id, page_id, (0, 0), (5, 5), idem_key="k1")
    i2 = doc.place_item(a.asset_id, page_id, (0, 0), (5, 5), idem_key="k1")
    assert i2.item_id == i1.item_id
    assert len(doc.items) == 1


# ------------------------------------------------------------ persistence

def journal_mutations(doc, blobs, rng):
    page_ids = list(doc.pages)
    ops = []
    for _ in range(rng.randint(1, 4)):
        choice = rng.random()
        if choice < 0.3 or not doc.assets:
            payload = write_png(np.full((4, 4, 4), rng.randrange(256), dtype=np.uint8))
            doc.ingest_asset(blobs.put(payload), "image", dims=(4, 4))
        elif choice < 0.6:
            asset_id = rng.choice(list(doc.assets))
            doc.place_item(asset_id, rng.choice(page_ids), (rng.random() * 100, 0), (10, 10))
        elif choice < 0.8 and doc.items:
            doc.touch_item(rng.choice(list(doc.items)))
        elif doc.items:
            doc.set_emphasis(rng.choice(list(doc.items)), rng.random())
        ops.append(choice)
    return ops


def test_reload_equals_live_state(tmp_path):
    directory = tmp_path / "doc"
    doc, blobs = make_doc(tmp_path, directory=directory)
    doc.create_page("p")
    rng = random.Random(3)
    for _ in range(10):
        journal_mutations(doc, blobs, rng)
    expected = doc.state_dict()
    doc.close()
    loaded = Document.load("doc1", blobs, directory)
    assert loaded.state_dict() == expected


def test_snapshot_plus_journal_equals_pure_journal(tmp_path):
    directory = tmp_path / "doc"
    doc, blobs = make_doc(tmp_path, directory=directory)
    doc.create_page("p")
    rng = random.Random(4)
    journal_mutations(doc, blobs, rng)
    doc.write_snapshot()
    journal_mutations(doc, blobs, rng)  # tail after the snapshot
    expected = doc.state_dict()
    doc._journal_fh.flush()

    with_snapshot = Document.load("doc1", blobs, directory)
    assert with_snapshot.state_dict() == expected

    (directory / "snapshot.json").unlink()
    pure_journal = Document.load("doc1", blobs, directory)
    assert pure_journal.state_dict() == expected
    doc.close()


def test_torn_tail_write_loses_at_most_last_mutation(tmp_path):
    directory = tmp_path / "doc"
    doc, blobs = make_doc(tmp_path, directory=directory)
    doc.create_page("p")
    a = add_image_asset(doc, blobs)
    state_before_last = copy.deepcopy(doc.state_dict())
    doc.place_item(a.asset_id, next(iter(doc.pages)), (0, 0), (5, 5))
    doc._journal_fh.flush()
    doc._journal_fh.close()
    doc._journal_fh = None

    journal = directory / "journal.jsonl"
    data = journal.read_bytes()
    lines = data.splitlines(keepends=True)
    torn = b"".join(lines[:-1]) + lines[-1][: len(lines[-1]) // 2]  # crash mid-write
    journal.write_bytes(torn)

    loaded = Document.load("doc1", blobs, directory)
    assert loaded.state_dict() == state_before_last


def test_journal_records_are_json_lines(tmp_path):
    directory = tmp_path / "doc"
    doc, blobs = make_doc(tmp_path, directory=directory)
    doc.create_page("p")
    add_image_asset(doc, blobs)
    doc._journal_fh.flush()
    lines = (directory / "journal.jsonl").read_text().splitlines()
    assert len(lines) == 2
    seqs = [json.loads(line)["seq"] for line in lines]
    assert seqs == [1, 2]


def test_event_stream_matches_journal(tmp_path):
    directory = tmp_path / "doc"
    doc, blobs = make_doc(tmp_path, directory=directory)
    seen = []
    doc.subscribe(seen.append)
    doc.create_page("p")
    add_image_asset(doc, blobs)
    doc._journal_fh.flush()
    journal = [json.loads(line) for line in (directory / "journal.jsonl").read_text().splitlines()]
    assert seen == journal
