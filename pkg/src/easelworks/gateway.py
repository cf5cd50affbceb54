"""Generation gateway: job queue, progress events and backend drivers.

Jobs move queued -> running -> {done, failed, cancelled}. A fixed pool of
`max_inflight` worker threads (default 1: models get swapped constantly,
serial execution is the sane default) drains a FIFO queue; watchers get a
per-job monotone event stream that always terminates with the terminal
status. Cancellation is race-safe: terminal states win.

The mock driver renders deterministic outputs purely from the canonical
graph bytes (plus referenced input blobs), so identical graphs always
produce identical output bytes.
"""

from __future__ import annotations

import logging
import queue
import threading
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import mediainfo, raster
from .canonical import sha256_hex
from .errors import InvalidGraph, NotCancellable, NotDone, UnknownJob
from .workflow import WorkflowGraph, is_edge

logger = logging.getLogger(__name__)

QUEUED = "queued"
RUNNING = "running"
DONE = "done"
FAILED = "failed"
CANCELLED = "cancelled"
TERMINAL = (DONE, FAILED, CANCELLED)


class JobCancelled(Exception):
    pass


@dataclass
class JobOutput:
    node_id: str
    kind: str  # image | video | model3d | text
    payload: bytes


@dataclass
class JobEvent:
    seq: int
    job_id: str
    kind: str  # "status" | "progress"
    status: str
    progress: float
    ts: float

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "job_id": self.job_id,
            "kind": self.kind,
            "status": self.status,
            "progress": self.progress,
            "ts": self.ts,
        }


@dataclass
class GenerationJob:
    job_id: str
    run_id: str
    graph: WorkflowGraph
    meta: dict
    submitted_at: float
    status: str = QUEUED
    progress: float = 0.0
    error: str | None = None
    finished_at: float | None = None
    outputs: list[JobOutput] = field(default_factory=list)
    events: list[JobEvent] = field(default_factory=list)
    cancel_requested: bool = False
    outputs_fetched: bool = False
    # terminal status is set before the on_terminal callback runs (the
    # callback needs it); `settled` flips only after the callback, and is
    # what drain() waits on
    settled: bool = False

    def to_dict(self) -> dict:
        return {
            "job_id": self.job_id,
            "run_id": self.run_id,
            "status": self.status,
            "progress": self.progress,
            "error": self.error,
            "submitted_at": self.submitted_at,
            "finished_at": self.finished_at,
            "meta": dict(self.meta),
            "output_count": len(self.outputs),
        }


class Gateway:
    def __init__(
        self,
        driver,
        max_inflight: int = 1,
        on_terminal: Callable[[GenerationJob], None] | None = None,
        clock: Callable[[], float] | None = None,
        idgen: Callable[[], str] | None = None,
    ):
        from .ids import uuid_gen, wall_clock

        self.driver = driver
        self.max_inflight = max(1, max_inflight)
        self.on_terminal = on_terminal
        self.clock = clock or wall_clock
        self.idgen = idgen or uuid_gen
        self.jobs: dict[str, GenerationJob] = {}
        self._queue: queue.Queue = queue.Queue()
        self._lock = threading.RLock()
        self._cond = threading.Condition(self._lock)
        self._workers: list[threading.Thread] = []
        self._stopping = False

    # ------------------------------------------------------------- public

    def submit(self, graph: WorkflowGraph, run_id: str, meta: dict | None = None) -> str:
        graph.validate()  # raises InvalidGraph
        with self._lock:
            if self._stopping:
                raise InvalidGraph("gateway is shut down")
            job = GenerationJob(
                job_id=self.idgen(),
                run_id=run_id,
                graph=graph,
                meta=meta or {},
                submitted_at=self.clock(),
            )
            self.jobs[job.job_id] = job
            self._emit(job, "status")
            self._ensure_workers()
        self._queue.put(job.job_id)
        return job.job_id

    def get(self, job_id: str) -> GenerationJob:
        with self._lock:
            job = self.jobs.get(job_id)
            if job is None:
                raise UnknownJob(f"job {job_id} not found")
            return job

    def watch(self, job_id: str, timeout: float | None = None):
        """Yield the job's events in order, ending with a terminal status."""
        self.get(job_id)
        cursor = 0
        while True:
            with self._cond:
                job = self.jobs[job_id]
                while cursor >= len(job.events):
                    if not self._cond.wait(timeout=timeout):
                        raise TimeoutError(f"no event for job {job_id} within {timeout}s")
                batch = job.events[cursor:]
                cursor = len(job.events)
            for event in batch:
                yield event
                if event.kind == "status" and event.status in TERMINAL:
                    return

    def cancel(self, job_id: str) -> str:
        with self._lock:
            job = self.get(job_id)
            if job.status in TERMINAL:
                raise NotCancellable(f"job {job_id} already {job.status}")
            job.cancel_requested = True
            if job.status == QUEUED:
                self._finish(job, CANCELLED)
        return self.get(job_id).status

    def fetch_outputs(self, job_id: str) -> list[JobOutput]:
        job = self.get(job_id)
        if job.status != DONE:
            raise NotDone(f"job {job_id} is {job.status}")
        return list(job.outputs)

    def wait(self, job_id: str, timeout: float = 30.0) -> GenerationJob:
        deadline_events = self.watch(job_id, timeout=timeout)
        for _event in deadline_events:
            pass
        return self.get(job_id)

    def drain(self, timeout: float = 60.0) -> None:
        """Block until every submitted job is terminal and settled."""
        with self._cond:
            ok = self._cond.wait_for(
                lambda: all(j.settled for j in self.jobs.values()), timeout=timeout
            )
        if not ok:
            raise TimeoutError("jobs still pending after drain timeout")

    def shutdown(self) -> None:
        with self._lock:
            self._stopping = True
            workers = list(self._workers)
        for _ in workers:
            self._queue.put(None)
        for w in workers:
            w.join(timeout=5)

    # ------------------------------------------------------------ internal

    def _ensure_workers(self) -> None:
        while len(self._workers) < self.max_inflight:
            t = threading.Thread(target=self._worker, daemon=True, name=f"gateway-worker-{len(self._workers)}")
            self._workers.append(t)
            t.start()

    def _emit(self, job: GenerationJob, kind: str) -> None:
        with self._cond:
            job.events.append(
                JobEvent(
                    seq=len(job.events),
                    job_id=job.job_id,
                    kind=kind,
                    status=job.status,
                    progress=job.progress,
                    ts=self.clock(),
                )
            )
            self._cond.notify_all()

    def _finish(self, job: GenerationJob, status: str, error: str | None = None) -> None:
        with self._lock:
            if job.status in TERMINAL:
                return
            job.status = status
            job.error = error
            job.finished_at = self.clock()
            if status == DONE:
                job.progress = 1.0
        # run the callback before the terminal event so watchers (and drain)
        # observe "done" only after outputs have been ingested downstream
        if self.on_terminal is not None:
            try:
                self.on_terminal(job)
            except Exception:
                logger.exception("on_terminal callback failed for job %s", job.job_id)
        with self._lock:
            job.settled = True
        self._emit(job, "status")

    def _worker(self) -> None:
        while True:
            job_id = self._queue.get()
            if job_id is None:
                return
            with self._lock:
                job = self.jobs[job_id]
                if job.status in TERMINAL:
                    continue
                job.status = RUNNING
                self._emit(job, "status")

            def progress(value: float, job=job):
                with self._lock:
                    if job.status != RUNNING:
                        return
                    job.progress = max(job.progress, min(1.0, value))
                    self._emit(job, "progress")

            def is_cancelled(job=job):
                return job.cancel_requested

            try:
                outputs = self.driver.execute(job, progress, is_cancelled)
            except JobCancelled:
                self._finish(job, CANCELLED)
                continue
            except Exception as exc:
                logger.warning("job %s failed: %s", job.job_id, exc)
                self._finish(job, FAILED, error=str(exc))
                continue
            with self._lock:
                job.outputs = list(outputs)
            self._finish(job, DONE)


# --------------------------------------------------------------- mock mode

# class -> control map kind rendered by the mock
_PREPROCESSOR_CLASSES = {
    "OpenPosePreprocessor": "pose",
    "DepthAnythingV2Preprocessor": "depth",
    "ScribblePreprocessor": "scribble",
    "LineArtPreprocessor": "lineart",
}

_SIZE_CLASSES = (
    "EmptySD3LatentImage",
    "EmptyLatentImage",
    "EmptyWanLatentVideo",
    "FluxKontextImageScale",
    "WanFirstLastFrameToVideo",
    "EmptyImage",
)

_PLACEHOLDERS = ("__none__.png", "__full__.png")


class MockDriver:
    """In-process backend: deterministic outputs derived from the graph.

    Generative outputs are solid-color images (color taken from the graph
    hash) stamped with the hash and declared dims; preprocessor and caption
    nodes are executed semantically on the real input pixels so metadata
    invariants hold; save-video/save-glb nodes produce structural stubs
    carrying the hash.
    """

    def __init__(self, blob_loader: Callable[[str], bytes], ticks: int = 4, tick_delay: float = 0.0):
        self.blob_loader = blob_loader
        self.ticks = max(1, ticks)
        self.tick_delay = tick_delay

    def execute(self, job: GenerationJob, progress, is_cancelled) -> list[JobOutput]:
        import time

        for i in range(1, self.ticks + 1):
            if is_cancelled():
                raise JobCancelled()
            if self.tick_delay:
                time.sleep(self.tick_delay)
            progress(i / self.ticks)
        if is_cancelled():
            raise JobCancelled()
        return self.render(job.graph)

    # ------------------------------------------------------------ helpers

    def _load_input(self, filename: str) -> np.ndarray:
        if filename == "__none__.png":
            return np.zeros((64, 64, 4), dtype=np.uint8)
        if filename == "__full__.png":
            return np.full((64, 64, 4), 255, dtype=np.uint8)
        digest = filename.rsplit(".", 1)[0]
        return mediainfo.load_image_rgba(self.blob_loader(digest))

    def _input_filenames(self, graph: WorkflowGraph) -> list[str]:
        names = []
        for nid in graph.find_nodes("LoadImage"):
            fname = graph.nodes[nid]["inputs"].get("image")
            if isinstance(fname, str) and fname not in _PLACEHOLDERS:
                names.append(fname)
        return names

    def _declared_dims(self, graph: WorkflowGraph) -> tuple[int, int]:
        for cls in _SIZE_CLASSES:
            for nid in graph.find_nodes(cls):
                inputs = graph.nodes[nid]["inputs"]
                w, h = inputs.get("width"), inputs.get("height")
                if isinstance(w, int) and isinstance(h, int):
                    return w, h
        inputs = self._input_filenames(graph)
        if inputs:
            img = self._load_input(inputs[0])
            w, h = img.shape[1], img.shape[0]
            for nid in graph.find_nodes("ImagePadForOutpaint"):
                pads = graph.nodes[nid]["inputs"]
                w += int(pads.get("left", 0)) + int(pads.get("right", 0))
                h += int(pads.get("top", 0)) + int(pads.get("bottom", 0))
            scale = 1.0
            if graph.find_nodes("ImageUpscaleWithModel"):
                scale *= 4.0
            for nid in graph.find_nodes("ImageScaleBy"):
                scale *= float(graph.nodes[nid]["inputs"].get("scale_by", 1.0))
            return max(1, int(round(w * scale))), max(1, int(round(h * scale)))
        return 512, 512

    def _producer_chain(self, graph: WorkflowGraph, node_id: str) -> list[str]:
        """Class types reachable upstream from a save node's media input."""
        chain = []
        seen = set()
        frontier = [node_id]
        while frontier:
            nid = frontier.pop()
            if nid in seen:
                continue
            seen.add(nid)
            node = graph.nodes[nid]
            chain.append(node["class_type"])
            for value in node["inputs"].values():
                if is_edge(value):
                    frontier.append(value[0])
        return chain

    def render(self, graph: WorkflowGraph) -> list[JobOutput]:
        digest = graph.digest()
        w, h = self._declared_dims(graph)
        outputs: list[JobOutput] = []
        for out_id in graph.outputs:
            save = graph.nodes[out_id]
            cls = save["class_type"]
            chain = self._producer_chain(graph, out_id)
            if cls == "SaveText":
                inputs = self._input_filenames(graph)
                stem = inputs[0].rsplit(".", 1)[0][:12] if inputs else digest[:12]
                outputs.append(JobOutput(out_id, "text", f"mock caption {stem}".encode("utf-8")))
            elif cls == "SaveVideo":
                length = 81
                fps = 16
                for nid in graph.find_nodes("WanFirstLastFrameToVideo"):
                    length = int(graph.nodes[nid]["inputs"].get("length", length))
                fps_in = save["inputs"].get("fps")
                if isinstance(fps_in, (int, float)):
                    fps = fps_in
                payload = mediainfo.write_mp4_stub(w, h, length / float(fps), {"workflow_hash": digest, "node": out_id})
                outputs.append(JobOutput(out_id, "video", payload))
            elif cls == "SaveGLB":
                payload = mediainfo.write_glb_stub({"workflow_hash": digest, "node": out_id})
                outputs.append(JobOutput(out_id, "model3d", payload))
            else:
                outputs.append(JobOutput(out_id, "image", self._render_image(graph, out_id, chain, digest, w, h)))
        return outputs

    def _render_image(self, graph: WorkflowGraph, out_id: str, chain: list[str], digest: str, w: int, h: int) -> bytes:
        preproc = [k for c, k in _PREPROCESSOR_CLASSES.items() if c in chain]
        if preproc:
            src = self._first_chain_input(graph, out_id)
            maps = raster.control_map_arrays(src)
            return mediainfo.write_png(maps[preproc[0]], {"workflow_hash": digest, "control_map": preproc[0], "node": out_id})
        if "RemoveBackground" in chain:
            src = self._first_chain_input(graph, out_id)
            from . import _kernels as K

            lum = K.luma(src[..., :3])
            out = src.copy()
            out[..., 3] = np.where(lum >= 240, 0, out[..., 3])
            return mediainfo.write_png(out, {"workflow_hash": digest, "node": out_id})
        color = bytes.fromhex(digest[:6])
        pixels = np.zeros((h, w, 4), dtype=np.uint8)
        pixels[..., 0] = color[0]
        pixels[..., 1] = color[1]
        pixels[..., 2] = color[2]
        pixels[..., 3] = 255
        text = {"workflow_hash": digest, "node": out_id, "width": str(w), "height": str(h)}
        return mediainfo.write_png(pixels, text)

    def _first_chain_input(self, graph: WorkflowGraph, out_id: str) -> np.ndarray:
        seen = set()
        frontier = [out_id]
        while frontier:
            nid = frontier.pop(0)
            if nid in seen:
                continue
            seen.add(nid)
            node = graph.nodes[nid]
            if node["class_type"] == "LoadImage":
                return self._load_input(node["inputs"]["image"])
            for value in node["inputs"].values():
                if is_edge(value):
                    frontier.append(value[0])
        return np.zeros((64, 64, 4), dtype=np.uint8)


def output_stamp(payload: bytes, kind: str) -> dict:
    """Read back the mock's provenance stamp from an output payload."""
    if kind == "image":
        return mediainfo.read_png_text(payload)
    if kind == "video":
        return mediainfo.read_mp4_meta(payload)
    if kind == "model3d":
        return mediainfo.read_glb_meta(payload)
    return {}


def graph_output_hash(graph: WorkflowGraph) -> str:
    return sha256_hex(graph.canonical())
