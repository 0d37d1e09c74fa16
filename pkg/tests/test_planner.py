import math

import numpy as np
import pytest

from telesim.core import GridGeometry, GridIndex, Pose2D
from telesim.nav import (
    Costmap,
    GoalInCollisionError,
    NoPathError,
    PlanPath,
    nearest_traversable,
    path_cells,
    path_weight_exact,
    plan_shortest_path,
)

from .oracles import dijkstra_min_path, exact_pair, random_cost_grid


def costmap_from(cost_grid, res=0.05):
    cost_grid = np.asarray(cost_grid, dtype=np.uint8)
    geom = GridGeometry(resolution=res, width=cost_grid.shape[1], height=cost_grid.shape[0], origin=Pose2D(0, 0))
    return Costmap(geometry=geom, cost=cost_grid)


def center_pose(cm, col, row):
    x, y = cm.geometry.center_of((col, row))
    return Pose2D(x, y, 0.0)


def test_start_equals_goal():
    cm = costmap_from(np.zeros((10, 10)))
    p = plan_shortest_path(cm, center_pose(cm, 3, 3), center_pose(cm, 3, 3))
    assert len(p.waypoints) == 1
    assert path_weight_exact(cm, path_cells(cm, p)) == (0, 0)


def test_empty_grid_diagonal():
    cm = costmap_from(np.zeros((10, 10)))
    p = plan_shortest_path(cm, center_pose(cm, 0, 0), center_pose(cm, 9, 9))
    cells = path_cells(cm, p)
    assert len(cells) == 10
    assert path_weight_exact(cm, cells) == (0, 9 * 512)
    assert p.length() == pytest.approx(9 * math.sqrt(2) * 0.05)


def test_waypoints_eight_adjacent_and_traversable():
    rng = np.random.default_rng(5)
    grid = random_cost_grid(rng, 25, 25)
    grid[0, 0] = 0
    grid[24, 24] = 0
    cm = costmap_from(grid)
    try:
        p = plan_shortest_path(cm, center_pose(cm, 0, 0), center_pose(cm, 24, 24))
    except NoPathError:
        pytest.skip("instance happened to be disconnected")
    cells = path_cells(cm, p)
    for a, b in zip(cells, cells[1:]):
        assert max(abs(a.col - b.col), abs(a.row - b.row)) == 1
    for c in cells:
        assert cm.cost[c.row, c.col] < 253


@pytest.mark.parametrize("seed", range(25))
def test_astar_matches_dijkstra_oracle(seed):
    rng = np.random.default_rng(seed)
    w = int(rng.integers(8, 24))
    h = int(rng.integers(8, 24))
    grid = random_cost_grid(rng, w, h)
    grid[0, 0] = 0
    grid[h - 1, w - 1] = 0
    cm = costmap_from(grid)
    oracle = dijkstra_min_path(grid, (0, 0), (w - 1, h - 1))
    if oracle is None:
        with pytest.raises(NoPathError):
            plan_shortest_path(cm, center_pose(cm, 0, 0), center_pose(cm, w - 1, h - 1))
        return
    p = plan_shortest_path(cm, center_pose(cm, 0, 0), center_pose(cm, w - 1, h - 1))
    ours = [tuple(c) for c in path_cells(cm, p)]
    assert exact_pair(grid, ours) == exact_pair(grid, oracle)


def test_plans_are_deterministic():
    rng = np.random.default_rng(123)
    grid = random_cost_grid(rng, 20, 20)
    grid[0, 0] = grid[19, 19] = 0
    cm = costmap_from(grid)
    a = plan_shortest_path(cm, center_pose(cm, 0, 0), center_pose(cm, 19, 19))
    b = plan_shortest_path(cm, center_pose(cm, 0, 0), center_pose(cm, 19, 19))
    assert a.waypoints == b.waypoints


def test_goal_in_collision_relocates_nearby():
    grid = np.zeros((20, 20), dtype=np.uint8)
    grid[10, 10] = 254
    grid[9:12, 9:12] = np.maximum(grid[9:12, 9:12], 253)
    cm = costmap_from(grid)
    p = plan_shortest_path(cm, center_pose(cm, 0, 0), center_pose(cm, 10, 10))
    end = path_cells(cm, p)[-1]
    assert cm.cost[end.row, end.col] < 253
    # Relocated endpoint stays within 0.3 m of the requested goal.
    gx, gy = cm.geometry.center_of((10, 10))
    assert math.hypot(p.goal.x - gx, p.goal.y - gy) <= 0.3


def test_goal_fully_enclosed_raises():
    grid = np.zeros((30, 30), dtype=np.uint8)
    grid[5:26, 5:26] = 253  # a 21x21 blocked blob, radius > 0.3 m at 0.05 res
    cm = costmap_from(grid)
    with pytest.raises(GoalInCollisionError):
        plan_shortest_path(cm, center_pose(cm, 0, 0), center_pose(cm, 15, 15))


def test_unreachable_goal_raises_no_path():
    grid = np.zeros((11, 11), dtype=np.uint8)
    grid[:, 5] = 254  # full wall
    cm = costmap_from(grid)
    with pytest.raises(NoPathError):
        plan_shortest_path(cm, center_pose(cm, 1, 5), center_pose(cm, 9, 5))


def test_nearest_traversable_deterministic_tie_break():
    grid = np.full((9, 9), 253, dtype=np.uint8)
    grid[4, 2] = 0
    grid[4, 6] = 0  # same distance from (4, 4): tie broken by (row, col)
    cm = costmap_from(grid)
    assert nearest_traversable(cm, GridIndex(4, 4)) == (2, 4)


def test_plan_payload_roundtrip():
    cm = costmap_from(np.zeros((6, 6)))
    p = plan_shortest_path(cm, center_pose(cm, 0, 0), center_pose(cm, 5, 2))
    again = PlanPath.from_payload(p.as_payload())
    assert again == p
