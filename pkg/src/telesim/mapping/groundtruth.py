"""Rasterize a world into the tri-state classes for map-quality checks."""

from __future__ import annotations

import numpy as np

from ..core import GridGeometry
from ..sim.world import WorldModel, _point_segment_distances
from .occupancy import CELL_FREE, CELL_OCCUPIED


def rasterize_ground_truth(world: WorldModel, geometry: GridGeometry) -> np.ndarray:
    """Cell classes the mapper should converge to: occupied within one cell
    of a boundary segment, free elsewhere (obstacle interiors count as
    occupied too)."""
    from ..sim.world import _point_in_convex_polygon

    cols = np.arange(geometry.width)
    rows = np.arange(geometry.height)
    cx = geometry.origin.x + (cols + 0.5) * geometry.resolution
    cy = geometry.origin.y + (rows + 0.5) * geometry.resolution
    segs = world.segments()
    truth = np.full((geometry.height, geometry.width), CELL_FREE, dtype=np.int8)
    for r in range(geometry.height):
        for c in range(geometry.width):
            d = float(np.min(_point_segment_distances(cx[c], cy[r], segs)))
            inside = any(
                _point_in_convex_polygon(cx[c], cy[r], ob.polygon_at(world.time)) for ob in world.obstacles
            )
            if inside or d <= geometry.resolution:
                truth[r, c] = CELL_OCCUPIED
    return truth
