"""Collage compositing and stroke rasterization, checked against
independent per-pixel oracles."""

import itertools

import numpy as np

from easelworks import mediainfo
from easelworks.raster import Layer, flatten_layers, parse_color, rasterize_strokes


def source_over_oracle(dst, src):
    """Independent per-pixel premultiplied source-over (plain Python)."""
    h, w, _ = dst.shape
    out = np.zeros_like(dst)

    def prem(px):
        r, g, b, a = (int(v) for v in px)
        return ((r * a + 127) // 255, (g * a + 127) // 255, (b * a + 127) // 255, a)

    def unprem(px):
        r, g, b, a = px
        if a == 0:
            return (0, 0, 0, 0)
        return (
            min(255, (r * 255 + a // 2) // a),
            min(255, (g * 255 + a // 2) // a),
            min(255, (b * 255 + a // 2) // a),
            a,
        )

    for y in range(h):
        for x in range(w):
            s = prem(src[y, x])
            d = prem(dst[y, x])
            blended = tuple(s[c] + (d[c] * (255 - s[3]) + 127) // 255 for c in range(4))
            out[y, x] = unprem(blended)
    return out


def solid(w, h, rgba):
    arr = np.zeros((h, w, 4), dtype=np.uint8)
    arr[:, :] = rgba
    return arr


def test_single_opaque_layer_is_identity():
    pixels = np.random.default_rng(3).integers(0, 256, (20, 30, 4), dtype=np.uint8)
    pixels[..., 3] = 255
    out = flatten_layers([Layer(pixels=pixels, x=0, y=0)], 30, 20)
    assert np.array_equal(out, pixels)


def test_opaque_top_layer_occludes_bottom():
    bottom = solid(10, 10, (0, 0, 255, 255))
    top = solid(10, 10, (255, 0, 0, 255))
    out = flatten_layers(
        [Layer(bottom, 0, 0, z=0, sort_key="b"), Layer(top, 0, 0, z=1, sort_key="t")], 10, 10
    )
    assert np.array_equal(out, top)


def test_half_alpha_blend_matches_oracle():
    # 2x2 red at 50% alpha over 2x2 opaque blue
    blue = solid(2, 2, (0, 0, 255, 255))
    red = solid(2, 2, (255, 0, 0, 128))
    out = flatten_layers(
        [Layer(blue, 0, 0, z=0, sort_key="blue"), Layer(red, 0, 0, z=1, sort_key="red")], 2, 2
    )
    expected = source_over_oracle(blue, red)
    assert np.array_equal(out, expected)


def test_layer_permutation_with_fixed_z_is_byte_identical():
    rng = np.random.default_rng(5)
    layers = [
        Layer(rng.integers(0, 256, (8, 8, 4), dtype=np.uint8), x=i * 3.0, y=i * 2.0, z=i % 2, sort_key=f"k{i}")
        for i in range(4)
    ]
    reference = None
    for perm in itertools.permutations(layers):
        out = mediainfo.write_png(flatten_layers(list(perm), 24, 20))
        if reference is None:
            reference = out
        assert out == reference


def test_layer_scaling_uses_nearest_for_2x():
    src = np.zeros((2, 2, 4), dtype=np.uint8)
    src[0, 0] = (255, 0, 0, 255)
    src[1, 1] = (0, 255, 0, 255)
    out = flatten_layers([Layer(src, 0, 0, scale=2.0)], 4, 4)
    # nearest-neighbor keeps hard edges: top-left 2x2 block all red
    assert np.array_equal(out[0, 0], out[1, 1])
    assert tuple(out[0, 0]) == (255, 0, 0, 255)


def test_empty_strokes_full_transparency():
    out = rasterize_strokes([], 16, 16)
    assert out.shape == (16, 16, 4)
    assert out.sum() == 0


def test_horizontal_stroke_band():
    out = rasterize_strokes(
        [{"points": [[2.0, 8.0], [30.0, 8.0]], "width": 6.0, "color": "#112233"}], 32, 16
    )
    col_alpha = out[:, 16, 3]
    band = int((col_alpha > 0).sum())
    assert abs(band - 6) <= 1
    painted = out[out[..., 3] > 0]
    assert set(map(tuple, painted)) == {(0x11, 0x22, 0x33, 255)}


def test_stroke_determinism():
    strokes = [
        {"points": [[1.0, 1.0], [20.0, 14.0], [5.0, 18.0]], "width": 3.5, "color": "#ff8800"},
        {"points": [[10.0, 2.0]], "width": 5.0, "color": [0, 128, 255, 200]},
    ]
    a = mediainfo.write_png(rasterize_strokes(strokes, 24, 24))
    b = mediainfo.write_png(rasterize_strokes(list(strokes), 24, 24))
    assert a == b


def test_parse_color_forms():
    assert parse_color("#ff0080") == (255, 0, 128, 255)
    assert parse_color("#ff008040") == (255, 0, 128, 64)
    assert parse_color([1, 2, 3]) == (1, 2, 3, 255)
    assert parse_color((1, 2, 3, 4)) == (1, 2, 3, 4)
