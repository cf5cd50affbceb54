"""Raster kernels with import-time implementation selection.

Prefers the compiled Cython extension; falls back to the numpy
implementation when the extension is missing or EASELWORKS_PURE_PYTHON=1.
Both expose the same functions with bit-identical results.
"""

import os

from . import kernels_py

if os.environ.get("EASELWORKS_PURE_PYTHON") == "1":
    _impl = kernels_py
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = kernels_py

IMPL = _impl.IMPL
premultiply = _impl.premultiply
unpremultiply = _impl.unpremultiply
composite_over = _impl.composite_over
resize_nearest = _impl.resize_nearest
resize_bilinear = _impl.resize_bilinear
stroke_mask = _impl.stroke_mask
luma = _impl.luma
sobel_mag = _impl.sobel_mag

__all__ = [
    "IMPL",
    "premultiply",
    "unpremultiply",
    "composite_over",
    "resize_nearest",
    "resize_bilinear",
    "stroke_mask",
    "luma",
    "sobel_mag",
]
