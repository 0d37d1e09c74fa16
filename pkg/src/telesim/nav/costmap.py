"""Costmap: obstacle proximity folded into per-cell traversal cost.

Occupied cells are lethal; anything within the robot radius of one is
inscribed (guaranteed collision for a disk robot); beyond that the cost
decays exponentially with distance and reaches zero at the inflation
radius. Unknown cells carry a medium cost so plans prefer mapped space
without refusing to cross unexplored areas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..core import GridGeometry
from ..mapping.occupancy import CELL_OCCUPIED, CELL_UNKNOWN, OccupancyMsg

COST_LETHAL = 254
COST_INSCRIBED = 253
COST_UNKNOWN = 128
COST_FREE = 0

DEFAULT_INFLATION_RADIUS = 0.35
DEFAULT_COST_DECAY = 10.0  # 1/m


@dataclass(frozen=True)
class Costmap:
    geometry: GridGeometry
    cost: np.ndarray  # (height, width) uint8, 0..254

    def cost_at(self, col: int, row: int) -> int:
        return int(self.cost[row, col])


def build_costmap(
    msg: OccupancyMsg,
    robot_radius: float,
    inflation_radius: float = DEFAULT_INFLATION_RADIUS,
    decay: float = DEFAULT_COST_DECAY,
) -> Costmap:
    """Inflate a tri-state map into traversal costs.

    Distances are exact Euclidean cell-center distances to the nearest
    occupied cell.
    """
    if inflation_radius < robot_radius:
        raise ValueError(f"inflation_radius {inflation_radius} must be >= robot_radius {robot_radius}")
    res = msg.geometry.resolution
    occupied = msg.cells == CELL_OCCUPIED
    cost = np.zeros(msg.cells.shape, dtype=np.float64)
    if occupied.any():
        d = ndimage.distance_transform_edt(~occupied) * res
        band = (d > robot_radius) & (d <= inflation_radius)
        cost[band] = np.rint(252.0 * np.exp(-decay * (d[band] - robot_radius)))
        cost[d <= robot_radius] = COST_INSCRIBED
        cost[occupied] = COST_LETHAL
    unknown = msg.cells == CELL_UNKNOWN
    cost[unknown] = np.maximum(cost[unknown], COST_UNKNOWN)
    return Costmap(geometry=msg.geometry, cost=cost.astype(np.uint8))
