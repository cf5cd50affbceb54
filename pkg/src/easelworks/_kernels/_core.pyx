# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled raster kernels.

Bit-identical twin of kernels_py: same integer formulas, same IEEE-double
segment-distance test. See kernels_py for the arithmetic contracts.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, floor, sqrt

cnp.import_array()

IMPL = "cython"


def premultiply(rgba):
    cdef cnp.uint8_t[:, :, ::1] px = np.ascontiguousarray(rgba, dtype=np.uint8)
    cdef Py_ssize_t h = px.shape[0], w = px.shape[1]
    out_arr = np.empty((h, w, 4), dtype=np.uint8)
    cdef cnp.uint8_t[:, :, ::1] out = out_arr
    cdef Py_ssize_t y, x, c
    cdef unsigned int a
    for y in range(h):
        for x in range(w):
            a = px[y, x, 3]
            for c in range(3):
                out[y, x, c] = <cnp.uint8_t>((px[y, x, c] * a + 127) // 255)
            out[y, x, 3] = px[y, x, 3]
    return out_arr


def unpremultiply(rgba):
    cdef cnp.uint8_t[:, :, ::1] px = np.ascontiguousarray(rgba, dtype=np.uint8)
    cdef Py_ssize_t h = px.shape[0], w = px.shape[1]
    out_arr = np.empty((h, w, 4), dtype=np.uint8)
    cdef cnp.uint8_t[:, :, ::1] out = out_arr
    cdef Py_ssize_t y, x, c
    cdef unsigned int a, v
    for y in range(h):
        for x in range(w):
            a = px[y, x, 3]
            for c in range(3):
                if a == 0:
                    out[y, x, c] = 0
                else:
                    v = (px[y, x, c] * 255 + a // 2) // a
                    out[y, x, c] = <cnp.uint8_t>(255 if v > 255 else v)
            out[y, x, 3] = px[y, x, 3]
    return out_arr


def composite_over(dst, src, ox, oy):
    cdef cnp.uint8_t[:, :, ::1] d = dst
    cdef cnp.uint8_t[:, :, ::1] s = np.ascontiguousarray(src, dtype=np.uint8)
    cdef Py_ssize_t dh = d.shape[0], dw = d.shape[1]
    cdef Py_ssize_t sh = s.shape[0], sw = s.shape[1]
    cdef Py_ssize_t iox = ox, ioy = oy
    cdef Py_ssize_t x0 = max(0, iox), y0 = max(0, ioy)
    cdef Py_ssize_t x1 = min(dw, iox + sw), y1 = min(dh, ioy + sh)
    if x0 >= x1 or y0 >= y1:
        return
    cdef Py_ssize_t y, x, c
    cdef unsigned int inv, sv, dv
    for y in range(y0, y1):
        for x in range(x0, x1):
            inv = 255 - s[y - ioy, x - iox, 3]
            for c in range(4):
                sv = s[y - ioy, x - iox, c]
                dv = d[y, x, c]
                d[y, x, c] = <cnp.uint8_t>(sv + (dv * inv + 127) // 255)


def resize_nearest(img, out_w, out_h):
    arr = np.ascontiguousarray(img, dtype=np.uint8)
    squeeze = arr.ndim == 2
    if squeeze:
        arr = arr[:, :, None]
    cdef cnp.uint8_t[:, :, ::1] px = arr
    cdef Py_ssize_t h = px.shape[0], w = px.shape[1], ch = px.shape[2]
    cdef Py_ssize_t ow = out_w, oh = out_h
    out_arr = np.empty((oh, ow, ch), dtype=np.uint8)
    cdef cnp.uint8_t[:, :, ::1] out = out_arr
    cdef Py_ssize_t y, x, c, sy, sx
    for y in range(oh):
        sy = ((2 * y + 1) * h) // (2 * oh)
        for x in range(ow):
            sx = ((2 * x + 1) * w) // (2 * ow)
            for c in range(ch):
                out[y, x, c] = px[sy, sx, c]
    return out_arr[:, :, 0] if squeeze else out_arr


cdef void _axis_coords(Py_ssize_t n_src, Py_ssize_t n_out,
                       long long[::1] i0, long long[::1] i1, long long[::1] f):
    cdef Py_ssize_t i
    cdef long long pos, hi = (n_src - 1) * 256
    for i in range(n_out):
        pos = ((2 * i + 1) * n_src * 128) // n_out - 128
        if pos < 0:
            pos = 0
        elif pos > hi:
            pos = hi
        i0[i] = pos >> 8
        f[i] = pos & 255
        i1[i] = i0[i] + 1 if i0[i] + 1 < n_src else n_src - 1


def resize_bilinear(img, out_w, out_h):
    arr = np.ascontiguousarray(img, dtype=np.uint8)
    squeeze = arr.ndim == 2
    if squeeze:
        arr = arr[:, :, None]
    cdef cnp.uint8_t[:, :, ::1] px = arr
    cdef Py_ssize_t h = px.shape[0], w = px.shape[1], ch = px.shape[2]
    cdef Py_ssize_t ow = out_w, oh = out_h

    xi0_a = np.empty(ow, dtype=np.int64); xi1_a = np.empty(ow, dtype=np.int64); xf_a = np.empty(ow, dtype=np.int64)
    yi0_a = np.empty(oh, dtype=np.int64); yi1_a = np.empty(oh, dtype=np.int64); yf_a = np.empty(oh, dtype=np.int64)
    cdef long long[::1] xi0 = xi0_a, xi1 = xi1_a, xf = xf_a
    cdef long long[::1] yi0 = yi0_a, yi1 = yi1_a, yf = yf_a
    _axis_coords(w, ow, xi0, xi1, xf)
    _axis_coords(h, oh, yi0, yi1, yf)

    mid_arr = np.empty((h, ow, ch), dtype=np.uint8)
    cdef cnp.uint8_t[:, :, ::1] mid = mid_arr
    cdef Py_ssize_t y, x, c
    cdef long long a, b
    for y in range(h):
        for x in range(ow):
            for c in range(ch):
                a = px[y, xi0[x], c]
                b = px[y, xi1[x], c]
                mid[y, x, c] = <cnp.uint8_t>((a * (256 - xf[x]) + b * xf[x] + 128) >> 8)

    out_arr = np.empty((oh, ow, ch), dtype=np.uint8)
    cdef cnp.uint8_t[:, :, ::1] out = out_arr
    for y in range(oh):
        for x in range(ow):
            for c in range(ch):
                a = mid[yi0[y], x, c]
                b = mid[yi1[y], x, c]
                out[y, x, c] = <cnp.uint8_t>((a * (256 - yf[y]) + b * yf[y] + 128) >> 8)
    return out_arr[:, :, 0] if squeeze else out_arr


def stroke_mask(h, w, points, radius):
    cdef Py_ssize_t ih = h, iw = w
    out_arr = np.zeros((ih, iw), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] mask = out_arr
    pts_arr = np.ascontiguousarray(points, dtype=np.float64)
    if pts_arr.size == 0:
        return out_arr
    cdef double[:, ::1] pts = pts_arr.reshape(-1, 2)
    cdef Py_ssize_t n = pts.shape[0]
    cdef double r = radius, r2 = radius * radius
    cdef Py_ssize_t si, nseg = n - 1 if n > 1 else 1
    cdef double px_, py_, qx, qy, ex, ey, len2, t, gx, gy, dx, dy, d2
    cdef double lo, hi
    cdef Py_ssize_t x_lo, x_hi, y_lo, y_hi, y, x
    for si in range(nseg):
        px_ = pts[si, 0]; py_ = pts[si, 1]
        if n > 1:
            qx = pts[si + 1, 0]; qy = pts[si + 1, 1]
        else:
            qx = px_; qy = py_
        lo = (px_ if px_ < qx else qx) - r - 1.0
        hi = (px_ if px_ > qx else qx) + r + 1.0
        x_lo = <Py_ssize_t>floor(lo) if lo > 0 else 0
        x_hi = <Py_ssize_t>ceil(hi) if hi < iw else iw
        lo = (py_ if py_ < qy else qy) - r - 1.0
        hi = (py_ if py_ > qy else qy) + r + 1.0
        y_lo = <Py_ssize_t>floor(lo) if lo > 0 else 0
        y_hi = <Py_ssize_t>ceil(hi) if hi < ih else ih
        if x_lo >= x_hi or y_lo >= y_hi:
            continue
        ex = qx - px_; ey = qy - py_
        len2 = ex * ex + ey * ey
        for y in range(y_lo, y_hi):
            gy = y + 0.5
            for x in range(x_lo, x_hi):
                gx = x + 0.5
                if len2 == 0.0:
                    dx = gx - px_; dy = gy - py_
                else:
                    t = ((gx - px_) * ex + (gy - py_) * ey) / len2
                    if t < 0.0:
                        t = 0.0
                    elif t > 1.0:
                        t = 1.0
                    dx = gx - (px_ + t * ex); dy = gy - (py_ + t * ey)
                d2 = dx * dx + dy * dy
                if d2 <= r2:
                    mask[y, x] = 1
    return out_arr


def luma(rgb):
    cdef cnp.uint8_t[:, :, ::1] px = np.ascontiguousarray(rgb, dtype=np.uint8)
    cdef Py_ssize_t h = px.shape[0], w = px.shape[1]
    out_arr = np.empty((h, w), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef Py_ssize_t y, x
    for y in range(h):
        for x in range(w):
            out[y, x] = <cnp.uint8_t>((77 * px[y, x, 0] + 150 * px[y, x, 1] + 29 * px[y, x, 2] + 128) >> 8)
    return out_arr


def sobel_mag(gray):
    cdef cnp.uint8_t[:, ::1] g = np.ascontiguousarray(gray, dtype=np.uint8)
    cdef Py_ssize_t h = g.shape[0], w = g.shape[1]
    out_arr = np.empty((h, w), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] out = out_arr
    cdef Py_ssize_t y, x
    cdef Py_ssize_t ym, yp, xm, xp
    cdef long long gx, gy, v
    cdef long long mag
    for y in range(h):
        ym = y - 1 if y > 0 else 0
        yp = y + 1 if y + 1 < h else h - 1
        for x in range(w):
            xm = x - 1 if x > 0 else 0
            xp = x + 1 if x + 1 < w else w - 1
            gx = (g[ym, xp] + 2 * g[y, xp] + g[yp, xp]) - (g[ym, xm] + 2 * g[y, xm] + g[yp, xm])
            gy = (g[yp, xm] + 2 * g[yp, x] + g[yp, xp]) - (g[ym, xm] + 2 * g[ym, x] + g[ym, xp])
            v = gx * gx + gy * gy
            mag = <long long>floor(sqrt(<double>v))
            out[y, x] = <cnp.uint8_t>(255 if mag > 255 else mag)
    return out_arr
