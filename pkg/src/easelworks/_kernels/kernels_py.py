"""Pure-Python (numpy) raster kernels.

This is the fallback twin of the compiled extension `_core`. Every function
here is specified in exact integer (or IEEE-double) arithmetic and the
compiled version must produce bit-identical results; tests enforce parity.

Conventions:
- images are numpy uint8 arrays, (h, w), (h, w, 3) or (h, w, 4)
- RGBA buffers passed to composite_over are premultiplied alpha
- integer alpha product: scale(v, a) = (v * a + 127) // 255
"""

from __future__ import annotations

import numpy as np

IMPL = "python"


def premultiply(rgba: np.ndarray) -> np.ndarray:
    px = rgba.astype(np.uint32)
    a = px[..., 3:4]
    out = px.copy()
    out[..., :3] = (px[..., :3] * a + 127) // 255
    return out.astype(np.uint8)


def unpremultiply(rgba: np.ndarray) -> np.ndarray:
    px = rgba.astype(np.uint32)
    a = px[..., 3]
    out = px.copy()
    nz = a > 0
    for c in range(3):
        ch = px[..., c]
        res = np.zeros_like(ch)
        res[nz] = np.minimum(255, (ch[nz] * 255 + a[nz] // 2) // a[nz])
        out[..., c] = res
    return out.astype(np.uint8)


def composite_over(dst: np.ndarray, src: np.ndarray, ox: int, oy: int) -> None:
    """Source-over `src` onto `dst` in place; both premultiplied RGBA.

    (ox, oy) is the top-left pixel of src in dst coordinates; the overlap
    is clipped to dst bounds.
    """
    dh, dw = dst.shape[0], dst.shape[1]
    sh, sw = src.shape[0], src.shape[1]
    x0, y0 = max(0, ox), max(0, oy)
    x1, y1 = min(dw, ox + sw), min(dh, oy + sh)
    if x0 >= x1 or y0 >= y1:
        return
    s = src[y0 - oy:y1 - oy, x0 - ox:x1 - ox].astype(np.uint32)
    d = dst[y0:y1, x0:x1].astype(np.uint32)
    inv = 255 - s[..., 3:4]
    out = s + (d * inv + 127) // 255
    dst[y0:y1, x0:x1] = out.astype(np.uint8)


def resize_nearest(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    h, w = img.shape[0], img.shape[1]
    ys = ((2 * np.arange(out_h, dtype=np.int64) + 1) * h) // (2 * out_h)
    xs = ((2 * np.arange(out_w, dtype=np.int64) + 1) * w) // (2 * out_w)
    return img[ys][:, xs].copy()


def _bilinear_axis_coords(n_src: int, n_out: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # center-aligned source position in 8-bit fixed point, clamped to valid range
    pos = ((2 * np.arange(n_out, dtype=np.int64) + 1) * n_src * 128) // n_out - 128
    pos = np.clip(pos, 0, (n_src - 1) * 256)
    i0 = pos >> 8
    f = pos & 255
    i1 = np.minimum(i0 + 1, n_src - 1)
    return i0, i1, f


def resize_bilinear(img: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    h, w = img.shape[0], img.shape[1]
    squeeze = img.ndim == 2
    px = img[..., None] if squeeze else img
    # horizontal pass
    i0, i1, f = _bilinear_axis_coords(w, out_w)
    a = px[:, i0].astype(np.int64)
    b = px[:, i1].astype(np.int64)
    mid = ((a * (256 - f[None, :, None]) + b * f[None, :, None] + 128) >> 8).astype(np.uint8)
    # vertical pass
    j0, j1, g = _bilinear_axis_coords(h, out_h)
    a = mid[j0].astype(np.int64)
    b = mid[j1].astype(np.int64)
    out = ((a * (256 - g[:, None, None]) + b * g[:, None, None] + 128) >> 8).astype(np.uint8)
    return out[..., 0] if squeeze else out


def stroke_mask(h: int, w: int, points: np.ndarray, radius: float) -> np.ndarray:
    """1 where the pixel center lies within `radius` of the polyline.

    Round caps and joins fall out of the distance-to-segment formulation.
    A single point yields a filled disc.
    """
    mask = np.zeros((h, w), dtype=np.uint8)
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) == 0:
        return mask
    segs = [(pts[i], pts[i + 1]) for i in range(len(pts) - 1)] or [(pts[0], pts[0])]
    r2 = radius * radius
    for p, q in segs:
        x_lo = max(0, int(np.floor(min(p[0], q[0]) - radius - 1.0)))
        x_hi = min(w, int(np.ceil(max(p[0], q[0]) + radius + 1.0)))
        y_lo = max(0, int(np.floor(min(p[1], q[1]) - radius - 1.0)))
        y_hi = min(h, int(np.ceil(max(p[1], q[1]) + radius + 1.0)))
        if x_lo >= x_hi or y_lo >= y_hi:
            continue
        cx = np.arange(x_lo, x_hi, dtype=np.float64) + 0.5
        cy = np.arange(y_lo, y_hi, dtype=np.float64) + 0.5
        gx, gy = np.meshgrid(cx, cy)
        ex, ey = q[0] - p[0], q[1] - p[1]
        len2 = ex * ex + ey * ey
        if len2 == 0.0:
            d2 = (gx - p[0]) ** 2 + (gy - p[1]) ** 2
        else:
            t = ((gx - p[0]) * ex + (gy - p[1]) * ey) / len2
            t = np.clip(t, 0.0, 1.0)
            d2 = (gx - (p[0] + t * ex)) ** 2 + (gy - (p[1] + t * ey)) ** 2
        hit = d2 <= r2
        mask[y_lo:y_hi, x_lo:x_hi][hit] = 1
    return mask


def luma(rgb: np.ndarray) -> np.ndarray:
    px = rgb.astype(np.uint32)
    return ((77 * px[..., 0] + 150 * px[..., 1] + 29 * px[..., 2] + 128) >> 8).astype(np.uint8)


def sobel_mag(gray: np.ndarray) -> np.ndarray:
    g = np.pad(gray.astype(np.int64), 1, mode="edge")
    gx = (
        (g[:-2, 2:] + 2 * g[1:-1, 2:] + g[2:, 2:])
        - (g[:-2, :-2] + 2 * g[1:-1, :-2] + g[2:, :-2])
    )
    gy = (
        (g[2:, :-2] + 2 * g[2:, 1:-1] + g[2:, 2:])
        - (g[:-2, :-2] + 2 * g[:-2, 1:-1] + g[:-2, 2:])
    )
    mag = np.floor(np.sqrt((gx * gx + gy * gy).astype(np.float64))).astype(np.int64)
    return np.minimum(255, mag).astype(np.uint8)
