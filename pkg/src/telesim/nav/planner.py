"""A* shortest paths over the costmap's 8-connected traversable cells.

Edge weight is the move length in cells (1 or sqrt(2)) scaled by
1 + mean(cost of the two cells) / 256 * cost_weight, so paths trade a
little extra distance for clearance. The open heap orders candidates by
(f, h, row, col), which makes expansion order, and therefore the returned
path, fully deterministic.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from ..core import GridBoundsError, GridIndex, Pose2D
from .costmap import COST_INSCRIBED, Costmap

DEFAULT_COST_WEIGHT = 3.0
GOAL_RELOCATE_RADIUS = 0.3  # m

SQRT2 = math.sqrt(2.0)

# Fixed expansion order: E, N, W, S, NE, NW, SW, SE.
_NEIGHBORS = (
    (1, 0, 1.0),
    (0, 1, 1.0),
    (-1, 0, 1.0),
    (0, -1, 1.0),
    (1, 1, SQRT2),
    (-1, 1, SQRT2),
    (-1, -1, SQRT2),
    (1, -1, SQRT2),
)


class NoPathError(Exception):
    """No traversable route between start and goal."""


class GoalInCollisionError(Exception):
    """Goal cell is lethal/inscribed and no traversable cell lies nearby."""


@dataclass(frozen=True)
class PlanPath:
    """Ordered waypoints at cell centers; heading points at the next waypoint."""

    stamp: float
    waypoints: tuple[Pose2D, ...]

    def __post_init__(self) -> None:
        if not self.waypoints:
            raise ValueError("a plan must hold at least one waypoint")

    @property
    def goal(self) -> Pose2D:
        return self.waypoints[-1]

    def length(self) -> float:
        return sum(a.distance_to(b) for a, b in zip(self.waypoints, self.waypoints[1:]))

    def as_payload(self) -> dict:
        return {
            "stamp": self.stamp,
            "waypoints": [w.as_dict() for w in self.waypoints],
        }

    @classmethod
    def from_payload(cls, d: dict) -> "PlanPath":
        return cls(
            stamp=float(d["stamp"]),
            waypoints=tuple(Pose2D.from_dict(w) for w in d["waypoints"]),
        )


def _octile(a: GridIndex, b: GridIndex) -> float:
    dc = abs(a.col - b.col)
    dr = abs(a.row - b.row)
    return max(dc, dr) + (SQRT2 - 1.0) * min(dc, dr)


def _edge_multiplier(cost_a: int, cost_b: int, cost_weight: float) -> float:
    return 1.0 + (cost_a + cost_b) / 2.0 / 256.0 * cost_weight


def nearest_traversable(costmap: Costmap, cell: GridIndex, radius_m: float = GOAL_RELOCATE_RADIUS) -> GridIndex | None:
    """Closest traversable cell within radius_m of cell, ties broken by
    (distance, row, col); None when the whole disk is blocked."""
    geom = costmap.geometry
    r_cells = int(math.ceil(radius_m / geom.resolution))
    candidates = []
    for dr in range(-r_cells, r_cells + 1):
        for dc in range(-r_cells, r_cells + 1):
            col, row = cell.col + dc, cell.row + dr
            if not (0 <= col < geom.width and 0 <= row < geom.height):
                continue
            d = math.hypot(dc, dr) * geom.resolution
            if d > radius_m:
                continue
            if costmap.cost[row, col] < COST_INSCRIBED:
                candidates.append((d, row, col))
    if not candidates:
        return None
    d, row, col = min(candidates)
    return GridIndex(col, row)


def plan_shortest_path(
    costmap: Costmap,
    start: Pose2D,
    goal: Pose2D,
    cost_weight: float = DEFAULT_COST_WEIGHT,
    stamp: float = 0.0,
) -> PlanPath:
    """Minimal-weight 8-connected path from start to goal (cell centers).

    A goal on a lethal/inscribed cell is relocated to the nearest
    traversable cell within 0.3 m (GoalInCollisionError when none exists).
    A start cell that has become untraversable, e.g. an obstacle moved into
    the robot's inflation band, is relocated the same way so the robot can
    plan its way out.
    """
    geom = costmap.geometry
    start_cell = geom.cell_at(start.x, start.y)
    goal_cell = geom.cell_at(goal.x, goal.y)

    if costmap.cost[goal_cell.row, goal_cell.col] >= COST_INSCRIBED:
        relocated = nearest_traversable(costmap, goal_cell)
        if relocated is None:
            raise GoalInCollisionError(f"goal cell {tuple(goal_cell)} blocked with no traversable cell within 0.3 m")
        goal_cell = relocated
    if costmap.cost[start_cell.row, start_cell.col] >= COST_INSCRIBED:
        relocated = nearest_traversable(costmap, start_cell)
        if relocated is None:
            raise NoPathError(f"start cell {tuple(start_cell)} blocked with no traversable cell within 0.3 m")
        start_cell = relocated

    cells = _astar(costmap, start_cell, goal_cell, cost_weight)
    return _cells_to_path(cells, geom, goal, stamp)


def _astar(costmap: Costmap, start: GridIndex, goal: GridIndex, cost_weight: float) -> list[GridIndex]:
    geom = costmap.geometry
    cost = costmap.cost
    width, height = geom.width, geom.height

    g = np.full((height, width), np.inf)
    parent: dict[tuple[int, int], tuple[int, int]] = {}
    g[start.row, start.col] = 0.0
    h0 = _octile(start, goal)
    open_heap: list[tuple[float, float, int, int, float]] = [(h0, h0, start.row, start.col, 0.0)]

    while open_heap:
        f, h, row, col, g_here = heapq.heappop(open_heap)
        if (col, row) == (goal.col, goal.row):
            return _reconstruct(parent, start, goal)
        if g_here > g[row, col]:
            continue  # stale entry
        c_here = int(cost[row, col])
        for dc, dr, move_len in _NEIGHBORS:
            ncol, nrow = col + dc, row + dr
            if not (0 <= ncol < width and 0 <= nrow < height):
                continue
            c_there = int(cost[nrow, ncol])
            if c_there >= COST_INSCRIBED:
                continue
            cand = g_here + move_len * _edge_multiplier(c_here, c_there, cost_weight)
            if cand < g[nrow, ncol]:
                g[nrow, ncol] = cand
                parent[(ncol, nrow)] = (col, row)
                nh = _octile(GridIndex(ncol, nrow), goal)
                heapq.heappush(open_heap, (cand + nh, nh, nrow, ncol, cand))
    raise NoPathError(f"no traversable route from {tuple(start)} to {tuple(goal)}")


def _reconstruct(parent: dict, start: GridIndex, goal: GridIndex) -> list[GridIndex]:
    cells = [goal]
    cur = (goal.col, goal.row)
    while cur != (start.col, start.row):
        cur = parent[cur]
        cells.append(GridIndex(*cur))
    cells.reverse()
    return cells


def _cells_to_path(cells: list[GridIndex], geom, goal: Pose2D, stamp: float) -> PlanPath:
    centers = [geom.center_of(c) for c in cells]
    waypoints = []
    for i, (x, y) in enumerate(centers):
        if i + 1 < len(centers):
            nx, ny = centers[i + 1]
            theta = math.atan2(ny - y, nx - x)
        elif waypoints:
            theta = waypoints[-1].theta
        else:
            theta = goal.theta
        waypoints.append(Pose2D(x, y, theta))
    return PlanPath(stamp=stamp, waypoints=tuple(waypoints))


def path_weight_exact(costmap: Costmap, path_cells: list[GridIndex], cost_weight: int = 3) -> tuple[int, int]:
    """Path weight as exact integers (A, B) with weight = (A + sqrt(2)*B)/512.

    Cardinal edges contribute 512 + cost_weight*(c_a + c_b) to A, diagonal
    edges the same quantity to B; requires an integer cost_weight. Two paths
    have equal real weight iff their (A, B) pairs match, which makes weight
    comparison exact despite floating point.
    """
    if cost_weight != int(cost_weight):
        raise ValueError("exact weights need an integer cost_weight")
    a_sum = 0
    b_sum = 0
    for p, q in zip(path_cells, path_cells[1:]):
        s = int(costmap.cost[p.row, p.col]) + int(costmap.cost[q.row, q.col])
        term = 512 + int(cost_weight) * s
        if abs(p.col - q.col) + abs(p.row - q.row) == 2:
            b_sum += term
        else:
            a_sum += term
    return a_sum, b_sum


def path_cells(costmap: Costmap, path: PlanPath) -> list[GridIndex]:
    geom = costmap.geometry
    return [geom.cell_at(w.x, w.y) for w in path.waypoints]
