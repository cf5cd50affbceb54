"""Payload decoding and tiny deterministic media writers.

Ingest accepts PNG/JPEG/WebP images, MP4 video, GLB models, WAV audio,
UTF-8 text and stroke-JSON sketches. The writers here produce minimal but
structurally valid files byte-deterministically (fixed zlib level, fixed
box layout); the mock backend uses them so that identical workflow graphs
always yield identical output bytes.
"""

from __future__ import annotations

import io
import json
import struct
import zlib
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import UndecodablePayload, UnsupportedKind

ASSET_KINDS = ("image", "video", "text", "audio", "model3d", "sketch")


@dataclass
class MediaInfo:
    kind: str
    dims: tuple[int, int] | None = None
    duration: float | None = None
    text: str | None = None


# ---------------------------------------------------------------- sniffing

def _is_png(b: bytes) -> bool:
    return b.startswith(b"\x89PNG\r\n\x1a\n")


def _is_jpeg(b: bytes) -> bool:
    return b.startswith(b"\xff\xd8\xff")


def _is_webp(b: bytes) -> bool:
    return len(b) >= 12 and b[:4] == b"RIFF" and b[8:12] == b"WEBP"


def _is_mp4(b: bytes) -> bool:
    return len(b) >= 12 and b[4:8] == b"ftyp"


def _is_glb(b: bytes) -> bool:
    return b.startswith(b"glTF")


def _is_wav(b: bytes) -> bool:
    return len(b) >= 12 and b[:4] == b"RIFF" and b[8:12] == b"WAVE"


def decode_payload(payload: bytes, kind: str) -> MediaInfo:
    """Validate payload against the declared kind; extract dims/duration."""
    if kind not in ASSET_KINDS:
        raise UnsupportedKind(f"unsupported asset kind {kind!r}")
    if not payload:
        raise UndecodablePayload("empty payload")

    if kind == "image":
        if not (_is_png(payload) or _is_jpeg(payload) or _is_webp(payload)):
            raise UndecodablePayload("payload is not PNG, JPEG or WebP")
        try:
            with Image.open(io.BytesIO(payload)) as im:
                return MediaInfo(kind="image", dims=(im.width, im.height))
        except Exception as exc:
            raise UndecodablePayload(f"image header parse failed: {exc}") from None

    if kind == "video":
        if not _is_mp4(payload):
            raise UndecodablePayload("payload is not MP4")
        dims, duration = _parse_mp4(payload)
        return MediaInfo(kind="video", dims=dims, duration=duration)

    if kind == "audio":
        if not _is_wav(payload):
            raise UndecodablePayload("payload is not WAV")
        return MediaInfo(kind="audio", duration=_parse_wav_duration(payload))

    if kind == "model3d":
        if not _is_glb(payload):
            raise UndecodablePayload("payload is not GLB")
        return MediaInfo(kind="model3d")

    if kind == "text":
        try:
            return MediaInfo(kind="text", text=payload.decode("utf-8"))
        except UnicodeDecodeError:
            raise UndecodablePayload("text payload is not valid UTF-8") from None

    # sketch: vector strokes kept as JSON until rasterized
    try:
        doc = json.loads(payload.decode("utf-8"))
        strokes = doc["strokes"]
        for s in strokes:
            if not s["points"] or float(s["width"]) <= 0:
                raise ValueError("bad stroke")
    except Exception:
        raise UndecodablePayload("sketch payload is not valid stroke JSON") from None
    return MediaInfo(kind="sketch")


# ------------------------------------------------------------- PNG writing

PNG_ZLIB_LEVEL = 6  # fixed: encoded bytes are part of content identity


def write_png(pixels: np.ndarray, text: dict[str, str] | None = None) -> bytes:
    """Encode a (h,w), (h,w,3) or (h,w,4) uint8 array as PNG.

    Deterministic: fixed filter (0), fixed zlib level, tEXt chunks in
    sorted key order.
    """
    arr = np.ascontiguousarray(pixels, dtype=np.uint8)
    if arr.ndim == 2:
        color_type, channels = 0, 1
    elif arr.ndim == 3 and arr.shape[2] == 3:
        color_type, channels = 2, 3
    elif arr.ndim == 3 and arr.shape[2] == 4:
        color_type, channels = 6, 4
    else:
        raise ValueError(f"unsupported array shape {arr.shape}")
    h, w = arr.shape[0], arr.shape[1]

    raw = bytearray()
    flat = arr.reshape(h, w * channels)
    for row in range(h):
        raw.append(0)
        raw += flat[row].tobytes()

    def chunk(tag: bytes, body: bytes) -> bytes:
        crc = zlib.crc32(tag + body) & 0xFFFFFFFF
        return struct.pack(">I", len(body)) + tag + body + struct.pack(">I", crc)

    out = bytearray(b"\x89PNG\r\n\x1a\n")
    out += chunk(b"IHDR", struct.pack(">IIBBBBB", w, h, 8, color_type, 0, 0, 0))
    for key in sorted(text or {}):
        out += chunk(b"tEXt", key.encode("latin-1") + b"\x00" + (text or {})[key].encode("latin-1"))
    out += chunk(b"IDAT", zlib.compress(bytes(raw), PNG_ZLIB_LEVEL))
    out += chunk(b"IEND", b"")
    return bytes(out)


def read_png_text(payload: bytes) -> dict[str, str]:
    """Extract tEXt metadata (used to verify mock output stamps)."""
    with Image.open(io.BytesIO(payload)) as im:
        return dict(im.text) if hasattr(im, "text") else {}


def load_image_rgba(payload: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(payload)) as im:
        return np.asarray(im.convert("RGBA"), dtype=np.uint8).copy()


# ------------------------------------------------------------- MP4 writing

def write_mp4_stub(width: int, height: int, duration_s: float, meta: dict[str, str] | None = None) -> bytes:
    """Minimal MP4: ftyp + moov(mvhd, trak/tkhd) + free(meta JSON) + mdat."""

    def box(tag: bytes, body: bytes) -> bytes:
        return struct.pack(">I", len(body) + 8) + tag + body

    timescale = 1000
    duration = int(round(duration_s * timescale))
    ftyp = box(b"ftyp", b"isom" + struct.pack(">I", 512) + b"isomiso2mp41")
    mvhd = box(
        b"mvhd",
        struct.pack(">BxxxIIII", 0, 0, 0, timescale, duration)
        + struct.pack(">IHH", 0x00010000, 0x0100, 0)
        + b"\x00" * 8
        + struct.pack(">9I", 0x00010000, 0, 0, 0, 0x00010000, 0, 0, 0, 0x40000000)
        + b"\x00" * 24
        + struct.pack(">I", 2),
    )
    tkhd = box(
        b"tkhd",
        struct.pack(">BxxxIIIxxxxI", 0, 0, 0, 1, duration)
        + b"\x00" * 8
        + struct.pack(">HHHH", 0, 0, 0, 0)
        + struct.pack(">9I", 0x00010000, 0, 0, 0, 0x00010000, 0, 0, 0, 0x40000000)
        + struct.pack(">II", width << 16, height << 16),
    )
    moov = box(b"moov", mvhd + box(b"trak", tkhd))
    free = box(b"free", json.dumps(meta or {}, sort_keys=True).encode("utf-8"))
    mdat = box(b"mdat", b"\x00" * 16)
    return ftyp + moov + free + mdat


def _iter_boxes(data: bytes, start: int, end: int):
    pos = start
    while pos + 8 <= end:
        size, tag = struct.unpack(">I4s", data[pos:pos + 8])
        if size < 8 or pos + size > end:
            break
        yield tag, pos + 8, pos + size
        pos += size


def _parse_mp4(payload: bytes) -> tuple[tuple[int, int] | None, float | None]:
    dims = None
    duration = None
    for tag, body_start, body_end in _iter_boxes(payload, 0, len(payload)):
        if tag != b"moov":
            continue
        for t2, s2, e2 in _iter_boxes(payload, body_start, body_end):
            if t2 == b"mvhd" and e2 - s2 >= 20:
                timescale, dur = struct.unpack(">II", payload[s2 + 12:s2 + 20])
                if timescale:
                    duration = dur / timescale
            elif t2 == b"trak":
                for t3, s3, e3 in _iter_boxes(payload, s2, e2):
                    if t3 == b"tkhd" and e3 - s3 >= 84:
                        w, h = struct.unpack(">II", payload[e3 - 8:e3])
                        if w and h:
                            dims = (w >> 16, h >> 16)
    return dims, duration


def read_mp4_meta(payload: bytes) -> dict[str, str]:
    for tag, s, e in _iter_boxes(payload, 0, len(payload)):
        if tag == b"free":
            try:
                return json.loads(payload[s:e].decode("utf-8"))
            except Exception:
                return {}
    return {}


def _parse_wav_duration(payload: bytes) -> float | None:
    pos = 12
    byte_rate = None
    data_size = None
    while pos + 8 <= len(payload):
        tag = payload[pos:pos + 4]
        size = struct.unpack("<I", payload[pos + 4:pos + 8])[0]
        if tag == b"fmt " and size >= 16:
            byte_rate = struct.unpack("<I", payload[pos + 16:pos + 20])[0]
        elif tag == b"data":
            data_size = size
        pos += 8 + size + (size & 1)
    if byte_rate and data_size is not None:
        return data_size / byte_rate
    return None


# ------------------------------------------------------------- GLB writing

def write_glb_stub(meta: dict[str, str] | None = None) -> bytes:
    doc = {"asset": {"version": "2.0"}, "extras": meta or {}}
    body = json.dumps(doc, sort_keys=True).encode("utf-8")
    body += b" " * (-len(body) % 4)
    total = 12 + 8 + len(body)
    return struct.pack("<III", 0x46546C67, 2, total) + struct.pack("<I", len(body)) + b"JSON" + body


def read_glb_meta(payload: bytes) -> dict[str, str]:
    if len(payload) < 20:
        return {}
    chunk_len = struct.unpack("<I", payload[12:16])[0]
    try:
        doc = json.loads(payload[20:20 + chunk_len].decode("utf-8"))
        return doc.get("extras", {})
    except Exception:
        return {}
