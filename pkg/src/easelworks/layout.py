"""Grid packing for canvas item groups."""

from __future__ import annotations

import math


def pack_grid(
    items: list[tuple[str, float, float, float, float]],
    cell_gap: float,
) -> dict[str, tuple[float, float]]:
    """Arrange items row-major into ceil(sqrt(n)) columns.

    `items`: (item_id, x, y, w, h). Relative order is the current reading
    order (y, then x, then id); cells are uniform, sized to the largest
    item; the grid's top-left is the bounding-box top-left of the inputs.
    Returns item_id -> new top-left position.
    """
    if not items:
        return {}
    ordered = sorted(items, key=lambda it: (it[2], it[1], it[0]))
    cols = math.ceil(math.sqrt(len(ordered)))
    cell_w = max(it[3] for it in ordered)
    cell_h = max(it[4] for it in ordered)
    origin_x = min(it[1] for it in ordered)
    origin_y = min(it[2] for it in ordered)
    moves: dict[str, tuple[float, float]] = {}
    for idx, (item_id, _x, _y, _w, _h) in enumerate(ordered):
        row, col = divmod(idx, cols)
        moves[item_id] = (
            origin_x + col * (cell_w + cell_gap),
            origin_y + row * (cell_h + cell_gap),
        )
    return moves
