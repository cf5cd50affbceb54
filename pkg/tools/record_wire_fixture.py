"""Record the remote driver's wire traffic against a scripted backend.

Produces tests/fixtures/wire/remote_session.json: the exact bytes the
driver sends for a fixed job plus the backend's responses. The conformance
test replays this capture and fails on any byte drift in requests.
"""

import base64
import json
import sys
from pathlib import Path

import httpx
import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from easelworks.gateway import GenerationJob  # noqa: E402
from easelworks.mediainfo import write_png  # noqa: E402
from easelworks.remote import RemoteDriver  # noqa: E402
from easelworks.workflow import WorkflowGraph  # noqa: E402

OUT = ROOT / "tests" / "fixtures" / "wire" / "remote_session.json"

PROMPT_ID = "11112222-3333-4444-5555-666677778888"


def fixture_graph_and_blob():
    payload = write_png(np.full((4, 4, 4), 77, dtype=np.uint8))
    import hashlib

    digest = hashlib.sha256(payload).hexdigest()
    graph = WorkflowGraph(
        nodes={
            "input_load": {"class_type": "LoadImage", "inputs": {"image": f"{digest}.png"}},
            "rembg": {"class_type": "RemoveBackground", "inputs": {"image": ["input_load", 0]}},
            "save": {"class_type": "SaveImage", "inputs": {"images": ["rembg", 0], "filename_prefix": "qop/remove_background"}},
        },
        outputs=["save"],
    )
    return graph, digest, payload


def scripted_backend(result_png: bytes):
    """Handler emulating the backend prompt API for one session."""
    state = {"polls": 0}

    def handle(request: httpx.Request) -> httpx.Response:
        path = request.url.path
        if path == "/upload/image" and request.method == "POST":
            return httpx.Response(200, json={"name": "input.png", "subfolder": "", "type": "input"})
        if path == "/prompt" and request.method == "POST":
            body = json.loads(request.content)
            assert "prompt" in body and "client_id" in body
            return httpx.Response(200, json={"prompt_id": PROMPT_ID, "number": 1, "node_errors": {}})
        if path == f"/history/{PROMPT_ID}":
            state["polls"] += 1
            if state["polls"] < 2:
                return httpx.Response(200, json={})
            return httpx.Response(
                200,
                json={
                    PROMPT_ID: {
                        "outputs": {
                            "save": {
                                "images": [
                                    {"filename": "qop_remove_background_00001_.png", "subfolder": "", "type": "output"}
                                ]
                            }
                        },
                        "status": {"status_str": "success", "completed": True},
                    }
                },
            )
        if path == "/view":
            return httpx.Response(200, content=result_png, headers={"Content-Type": "image/png"})
        raise AssertionError(f"unexpected request {request.method} {path}")

    return handle


def main():
    graph, digest, payload = fixture_graph_and_blob()
    result_png = write_png(np.full((4, 4, 4), 200, dtype=np.uint8), {"workflow_hash": graph.digest()})
    exchanges = []
    inner = scripted_backend(result_png)

    def recording_handler(request: httpx.Request) -> httpx.Response:
        response = inner(request)
        exchanges.append(
            {
                "request": {
                    "method": request.method,
                    "url": str(request.url),
                    "content_type": request.headers.get("content-type", ""),
                    "body_b64": base64.b64encode(request.content).decode(),
                },
                "response": {
                    "status": response.status_code,
                    "content_type": response.headers.get("content-type", ""),
                    "body_b64": base64.b64encode(response.content).decode(),
                },
            }
        )
        return response

    driver = RemoteDriver(
        "http://backend.test",
        client_id="easelworks",
        blob_loader={digest: payload}.__getitem__,
        transport=httpx.MockTransport(recording_handler),
        poll_interval=0.0,
    )
    job = GenerationJob(job_id="j1", run_id="r1", graph=graph, meta={}, submitted_at=0.0)
    outputs = driver.execute(job, lambda p: None, lambda: False)
    assert len(outputs) == 1 and outputs[0].kind == "image"

    OUT.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "graph": graph.to_obj(),
        "input_blob_b64": base64.b64encode(payload).decode(),
        "input_digest": digest,
        "prompt_id": PROMPT_ID,
        "exchanges": exchanges,
    }
    OUT.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"recorded {len(exchanges)} exchanges -> {OUT}")


if __name__ == "__main__":
    main()
