"""Median-cut palette extraction.

Deterministic: exact RGB histogram, boxes split at the weighted median of
the widest channel, output ordered by population descending then hex.
"""

from __future__ import annotations

import numpy as np


def _box_ranges(colors: np.ndarray) -> np.ndarray:
    return colors.max(axis=0) - colors.min(axis=0)


def median_cut(pixels: np.ndarray, k: int) -> list[tuple[str, int]]:
    """Quantize (n, 3) uint8 pixels to at most k colors.

    Returns (hex, population) pairs; fewer than k when the image has fewer
    distinct colors.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    flat = pixels.reshape(-1, 3).astype(np.int64)
    packed = (flat[:, 0] << 16) | (flat[:, 1] << 8) | flat[:, 2]
    uniq, counts = np.unique(packed, return_counts=True)
    colors = np.stack([(uniq >> 16) & 255, (uniq >> 8) & 255, uniq & 255], axis=1)

    boxes: list[np.ndarray] = [np.arange(len(uniq))]
    while len(boxes) < k:
        best, best_range = -1, 0
        for i, box in enumerate(boxes):
            if len(box) < 2:
                continue
            r = int(_box_ranges(colors[box]).max())
            if r > best_range:
                best, best_range = i, r
        if best < 0:
            break
        box = boxes.pop(best)
        ch = int(np.argmax(_box_ranges(colors[box])))
        order = box[np.lexsort((uniq[box], colors[box][:, ch]))]
        cum = np.cumsum(counts[order])
        half = cum[-1] / 2
        split = int(np.searchsorted(cum, half)) + 1
        split = min(max(split, 1), len(order) - 1)
        boxes.append(order[:split])
        boxes.append(order[split:])

    results = []
    for box in boxes:
        pop = int(counts[box].sum())
        avg = tuple(int((colors[box][:, c] * counts[box]).sum() + pop // 2) // pop for c in range(3))
        results.append(("#%02x%02x%02x" % avg, pop))
    results.sort(key=lambda rc: (-rc[1], rc[0]))
    return results


def extract_palette(rgba: np.ndarray, k: int = 6) -> list[dict]:
    """Palette of an RGBA image; fully transparent pixels are ignored."""
    rgb = rgba[..., :3].reshape(-1, 3)
    alpha = rgba[..., 3].reshape(-1)
    opaque = rgb[alpha > 0]
    if len(opaque) == 0:
        return []
    return [{"color": hex_, "count": count} for hex_, count in median_cut(opaque, k)]
