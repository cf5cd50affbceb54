"""Deterministic raster composition: collage flattening, stroke
rasterization and the grayscale control-map transforms.

All pixel work happens in the kernel layer (compiled or numpy twin) with
exact integer arithmetic, so outputs are byte-stable across runs, machines
and kernel implementations. Compositing is premultiplied-alpha source-over;
layers are resampled with nearest-neighbor for upscales up to 2x and
bilinear otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K


@dataclass
class Layer:
    """One collage layer: RGBA pixels plus its placement in rect space."""

    pixels: np.ndarray  # (h, w, 4) uint8, straight alpha
    x: float
    y: float
    scale: float = 1.0
    z: int = 0
    sort_key: str = ""  # deterministic tie-break for equal z (e.g. blob hash)


def _resample(rgba: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    h, w = rgba.shape[0], rgba.shape[1]
    if (out_w, out_h) == (w, h):
        return rgba
    upscale_le_2x = w <= out_w <= 2 * w and h <= out_h <= 2 * h
    if upscale_le_2x:
        return K.resize_nearest(rgba, out_w, out_h)
    return K.resize_bilinear(rgba, out_w, out_h)


def flatten_layers(layers: list[Layer], rect_w: int, rect_h: int) -> np.ndarray:
    """Compose layers over a transparent canvas, ascending z.

    Equal-z ties break on (sort_key, x, y) rather than list order, so any
    permutation of the layer list yields byte-identical output.
    """
    canvas = np.zeros((rect_h, rect_w, 4), dtype=np.uint8)
    ordered = sorted(layers, key=lambda l: (l.z, l.sort_key, l.x, l.y))
    for layer in ordered:
        src_h, src_w = layer.pixels.shape[0], layer.pixels.shape[1]
        dst_w = max(1, int(round(src_w * layer.scale)))
        dst_h = max(1, int(round(src_h * layer.scale)))
        scaled = _resample(layer.pixels, dst_w, dst_h)
        K.composite_over(canvas, K.premultiply(scaled), int(round(layer.x)), int(round(layer.y)))
    return K.unpremultiply(canvas)


def parse_color(color) -> tuple[int, int, int, int]:
    if isinstance(color, str):
        s = color.lstrip("#")
        if len(s) == 6:
            s += "ff"
        if len(s) != 8:
            raise ValueError(f"bad color {color!r}")
        return tuple(int(s[i:i + 2], 16) for i in (0, 2, 4, 6))
    vals = list(color)
    if len(vals) == 3:
        vals.append(255)
    return tuple(int(v) for v in vals)


def rasterize_strokes(strokes: list[dict], rect_w: int, rect_h: int, origin: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """Rasterize polyline strokes onto a transparent RGBA canvas.

    Each stroke: {points: [[x, y], ...], width, color}. Round caps and
    joins come from the distance-to-segment coverage test. Strokes paint
    in list order with source-over; an empty list yields a fully
    transparent image.
    """
    canvas = np.zeros((rect_h, rect_w, 4), dtype=np.uint8)
    for stroke in strokes:
        pts = np.asarray(stroke["points"], dtype=np.float64).reshape(-1, 2)
        pts = pts - np.asarray(origin, dtype=np.float64)
        radius = float(stroke["width"]) / 2.0
        mask = K.stroke_mask(rect_h, rect_w, pts, radius)
        r, g, b, a = parse_color(stroke.get("color", "#000000"))
        src = np.zeros((rect_h, rect_w, 4), dtype=np.uint8)
        src[mask == 1] = ((r * a + 127) // 255, (g * a + 127) // 255, (b * a + 127) // 255, a)
        K.composite_over(canvas, src, 0, 0)
    return K.unpremultiply(canvas)


def control_map_arrays(rgba: np.ndarray) -> dict[str, np.ndarray]:
    """The four mock structure maps, all same dims as the input.

    pose: luma; depth: inverted luma; scribble: edge magnitude;
    lineart: thresholded edges.
    """
    lum = K.luma(rgba[..., :3])
    edges = K.sobel_mag(lum)
    return {
        "pose": lum,
        "depth": (255 - lum.astype(np.int16)).astype(np.uint8),
        "scribble": edges,
        "lineart": np.where(edges >= 64, 255, 0).astype(np.uint8),
    }
