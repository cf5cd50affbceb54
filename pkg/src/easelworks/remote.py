"""Remote backend driver speaking the ComfyUI-style prompt/history API.

Submission: uploads referenced input blobs, POSTs the prompt JSON, then
follows the job by polling /history (or consuming a pushed event stream
when one is wired in). Requests are byte-stable -- canonical JSON bodies
and a fixed multipart boundary -- so wire-capture fixtures can assert
exact bytes. Transport errors are retried once; generation failures are
not retried.
"""

from __future__ import annotations

import json
import time
from typing import Callable, Iterable

import httpx

from .canonical import canonical_bytes
from .errors import BackendUnavailable
from .gateway import GenerationJob, JobCancelled, JobOutput
from .workflow import WorkflowGraph

MULTIPART_BOUNDARY = "easelworks-upload"

_KIND_BY_EXT = {"png": "image", "webp": "image", "jpg": "image", "jpeg": "image", "mp4": "video", "glb": "model3d", "txt": "text"}


def encode_upload(filename: str, payload: bytes) -> tuple[bytes, str]:
    """Multipart body for /upload/image with a fixed boundary."""
    head = (
        f"--{MULTIPART_BOUNDARY}\r\n"
        f'Content-Disposition: form-data; name="image"; filename="{filename}"\r\n'
        "Content-Type: application/octet-stream\r\n\r\n"
    ).encode("utf-8")
    overwrite = (
        f"\r\n--{MULTIPART_BOUNDARY}\r\n"
        'Content-Disposition: form-data; name="overwrite"\r\n\r\ntrue\r\n'
        f"--{MULTIPART_BOUNDARY}--\r\n"
    ).encode("utf-8")
    return head + payload + overwrite, f"multipart/form-data; boundary={MULTIPART_BOUNDARY}"


def prompt_body(graph: WorkflowGraph, client_id: str) -> bytes:
    return canonical_bytes({"client_id": client_id, "prompt": graph.to_prompt()})


def parse_backend_event(message: dict) -> dict | None:
    """Normalize a backend push frame into {progress} / {finished} / {error}."""
    kind = message.get("type")
    data = message.get("data") or {}
    if kind == "progress":
        maximum = data.get("max") or 1
        return {"progress": float(data.get("value", 0)) / float(maximum)}
    if kind == "executing" and data.get("node") is None:
        return {"finished": True, "prompt_id": data.get("prompt_id")}
    if kind == "execution_error":
        return {"error": data.get("exception_message", "execution error")}
    return None


class RemoteDriver:
    def __init__(
        self,
        base_url: str,
        client_id: str = "easelworks",
        blob_loader: Callable[[str], bytes] | None = None,
        transport: httpx.BaseTransport | None = None,
        poll_interval: float = 0.25,
        event_source: Callable[[str], Iterable[dict]] | None = None,
        timeout: float = 30.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.client_id = client_id
        self.blob_loader = blob_loader
        self.poll_interval = poll_interval
        self.event_source = event_source
        self.client = httpx.Client(base_url=self.base_url, transport=transport, timeout=timeout)

    # ------------------------------------------------------------ requests

    def _request(self, method: str, url: str, **kw) -> httpx.Response:
        """One automatic retry on transport errors, then BackendUnavailable."""
        for attempt in (0, 1):
            try:
                resp = self.client.request(method, url, **kw)
                resp.raise_for_status()
                return resp
            except httpx.TransportError as exc:
                if attempt == 1:
                    raise BackendUnavailable(f"backend unreachable: {exc}") from exc
            except httpx.HTTPStatusError as exc:
                raise BackendUnavailable(f"backend error {exc.response.status_code}: {exc.response.text}") from exc
        raise BackendUnavailable("unreachable")  # pragma: no cover

    def upload_inputs(self, graph: WorkflowGraph) -> None:
        if self.blob_loader is None:
            return
        for nid in graph.find_nodes("LoadImage"):
            filename = graph.nodes[nid]["inputs"].get("image")
            if not isinstance(filename, str) or filename.startswith("__"):
                continue
            digest = filename.rsplit(".", 1)[0]
            body, content_type = encode_upload(filename, self.blob_loader(digest))
            self._request("POST", "/upload/image", content=body, headers={"Content-Type": content_type})

    def submit_prompt(self, graph: WorkflowGraph) -> str:
        body = prompt_body(graph, self.client_id)
        resp = self._request("POST", "/prompt", content=body, headers={"Content-Type": "application/json"})
        return resp.json()["prompt_id"]

    def poll_history(self, prompt_id: str) -> dict | None:
        resp = self._request("GET", f"/history/{prompt_id}")
        entry = resp.json().get(prompt_id)
        return entry

    def download(self, filename: str, subfolder: str, folder_type: str) -> bytes:
        resp = self._request(
            "GET", "/view", params={"filename": filename, "subfolder": subfolder, "type": folder_type}
        )
        return resp.content

    def interrupt(self) -> None:
        try:
            self._request("POST", "/interrupt")
        except BackendUnavailable:
            pass

    # ------------------------------------------------------------ execute

    def execute(self, job: GenerationJob, progress, is_cancelled) -> list[JobOutput]:
        self.upload_inputs(job.graph)
        prompt_id = self.submit_prompt(job.graph)

        if self.event_source is not None:
            for message in self.event_source(prompt_id):
                if is_cancelled():
                    self.interrupt()
                    raise JobCancelled()
                event = parse_backend_event(message)
                if not event:
                    continue
                if "progress" in event:
                    progress(event["progress"])
                elif event.get("finished"):
                    break
                elif "error" in event:
                    raise RuntimeError(event["error"])

        while True:
            if is_cancelled():
                self.interrupt()
                raise JobCancelled()
            entry = self.poll_history(prompt_id)
            if entry is not None:
                break
            time.sleep(self.poll_interval)

        status = (entry.get("status") or {}).get("status_str", "success")
        if status == "error":
            raise RuntimeError("generation failed on backend")
        outputs: list[JobOutput] = []
        for node_id in sorted(entry.get("outputs", {})):
            files = entry["outputs"][node_id]
            for record in files.get("images", []) + files.get("videos", []) + files.get("files", []):
                payload = self.download(record["filename"], record.get("subfolder", ""), record.get("type", "output"))
                ext = record["filename"].rsplit(".", 1)[-1].lower()
                outputs.append(JobOutput(node_id, _KIND_BY_EXT.get(ext, "image"), payload))
        return outputs

    def close(self) -> None:
        self.client.close()


def load_event_fixture(path) -> list[dict]:
    """Recorded backend push frames (one JSON object per line)."""
    frames = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                frames.append(json.loads(line))
    return frames
