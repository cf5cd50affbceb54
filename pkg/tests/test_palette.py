"""Median-cut palette vs an independent plain-Python oracle."""

from collections import Counter

import numpy as np

from easelworks.palette import extract_palette, median_cut


def median_cut_oracle(pixels, k):
    """Same algorithm spec, independent implementation: dicts and sorts."""
    hist = Counter(tuple(int(v) for v in px) for px in pixels.reshape(-1, 3))
    boxes = [list(hist.keys())]

    def ranges(box):
        return [max(c[i] for c in box) - min(c[i] for c in box) for i in range(3)]

    while len(boxes) < k:
        best, best_range = -1, 0
        for i, box in enumerate(boxes):
            if len(box) < 2:
                continue
            r = max(ranges(box))
            if r > best_range:
                best, best_range = i, r
        if best < 0:
            break
        box = boxes.pop(best)
        ch = ranges(box).index(max(ranges(box)))
        box.sort(key=lambda c: (c[ch], (c[0] << 16) | (c[1] << 8) | c[2]))
        total = sum(hist[c] for c in box)
        cum = 0
        split = None
        for i, c in enumerate(box):
            cum += hist[c]
            if cum >= total / 2:
                split = i + 1
                break
        split = min(max(split, 1), len(box) - 1)
        boxes.append(box[:split])
        boxes.append(box[split:])

    out = []
    for box in boxes:
        pop = sum(hist[c] for c in box)
        avg = tuple((sum(c[i] * hist[c] for c in box) + pop // 2) // pop for i in range(3))
        out.append(("#%02x%02x%02x" % avg, pop))
    out.sort(key=lambda rc: (-rc[1], rc[0]))
    return out


def test_solid_color_single_entry():
    img = np.zeros((8, 8, 3), dtype=np.uint8)
    img[:, :] = (200, 10, 10)
    result = median_cut(img, 6)
    assert result == [("#c80a0a", 64)]


def test_two_tone_order_by_count_then_hex():
    img = np.zeros((4, 8, 3), dtype=np.uint8)
    img[:, :4] = (10, 10, 10)
    img[:, 4:] = (240, 240, 240)
    result = median_cut(img, 6)
    assert len(result) == 2
    assert {r[0] for r in result} == {"#0a0a0a", "#f0f0f0"}
    assert result[0][1] == result[1][1] == 16
    assert result[0][0] < result[1][0]  # equal counts: hex ascending


def test_sixteen_color_card_matches_oracle():
    rng = np.random.default_rng(11)
    colors = rng.integers(0, 256, (16, 3), dtype=np.uint8)
    card = np.zeros((16, 16, 3), dtype=np.uint8)
    for i in range(16):
        r, c = divmod(i, 4)
        card[r * 4:(r + 1) * 4, c * 4:(c + 1) * 4] = colors[i]
    for k in (2, 4, 6, 8, 16):
        assert median_cut(card, k) == median_cut_oracle(card, k), f"k={k}"


def test_random_image_matches_oracle():
    rng = np.random.default_rng(29)
    img = rng.integers(0, 8, (20, 20, 3), dtype=np.uint8) * 32
    assert median_cut(img, 6) == median_cut_oracle(img, 6)


def test_extract_palette_ignores_transparent():
    rgba = np.zeros((4, 4, 4), dtype=np.uint8)
    rgba[:2, :, :3] = (255, 0, 0)
    rgba[:2, :, 3] = 255  # opaque red; bottom half fully transparent black
    result = extract_palette(rgba, k=6)
    assert result == [{"color": "#ff0000", "count": 8}]


def test_extract_palette_all_transparent():
    assert extract_palette(np.zeros((4, 4, 4), dtype=np.uint8)) == []
