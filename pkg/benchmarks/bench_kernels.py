"""Benchmark the compiled raster kernels against the numpy fallback.

Run:  python benchmarks/bench_kernels.py [--size 1024] [--repeats 5]
Both implementations produce bit-identical output (asserted here too), so
the only difference worth reporting is time.
"""

import argparse
import time

import numpy as np

from easelworks._kernels import kernels_py

try:
    from easelworks._kernels import _core as kernels_cy
except ImportError:
    kernels_cy = None


def timed(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def cases(size, rng):
    rgba = rng.integers(0, 256, (size, size, 4), dtype=np.uint8)
    rgb = rgba[..., :3].copy()
    gray = rgba[..., 0].copy()
    src = rng.integers(0, 256, (size // 2, size // 2, 4), dtype=np.uint8)
    pts = rng.uniform(0, size, (24, 2))
    half = size // 2

    def composite(K):
        dst = np.zeros((size, size, 4), dtype=np.uint8)
        K.composite_over(dst, src, size // 4, size // 4)
        return dst

    return [
        ("premultiply", lambda K: K.premultiply(rgba)),
        ("unpremultiply", lambda K: K.unpremultiply(rgba)),
        ("composite_over", composite),
        ("resize_nearest 2x", lambda K: K.resize_nearest(rgba, size * 2, size * 2)),
        ("resize_bilinear 0.6x", lambda K: K.resize_bilinear(rgba, int(size * 0.6), int(size * 0.6))),
        ("stroke_mask 24pts", lambda K: K.stroke_mask(size, size, pts, 9.5)),
        ("luma", lambda K: K.luma(rgb)),
        ("sobel_mag", lambda K: K.sobel_mag(gray)),
        ("resize_bilinear half", lambda K: K.resize_bilinear(rgba, half, half)),
    ]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--size", type=int, default=1024)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    rows = []
    for name, fn in cases(args.size, rng):
        t_py, out_py = timed(lambda: fn(kernels_py), args.repeats)
        if kernels_cy is not None:
            t_cy, out_cy = timed(lambda: fn(kernels_cy), args.repeats)
            assert np.array_equal(out_py, out_cy), f"{name}: implementations diverge"
            rows.append((name, t_py, t_cy, t_py / t_cy))
        else:
            rows.append((name, t_py, None, None))

    print(f"\nkernel benchmark @ {args.size}x{args.size}, best of {args.repeats}")
    print(f"{'kernel':24} {'numpy (ms)':>12} {'cython (ms)':>12} {'speedup':>9}")
    for name, t_py, t_cy, ratio in rows:
        if t_cy is None:
            print(f"{name:24} {t_py * 1e3:12.2f} {'n/a':>12} {'n/a':>9}")
        else:
            print(f"{name:24} {t_py * 1e3:12.2f} {t_cy * 1e3:12.2f} {ratio:8.2f}x")
    if kernels_cy is None:
        print("\ncompiled kernels not built; showing numpy fallback only")


if __name__ == "__main__":
    main()
