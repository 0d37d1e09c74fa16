import numpy as np
import pytest

from telesim.core import GridGeometry, Pose2D
from telesim.mapping import CELL_FREE, CELL_OCCUPIED, CELL_UNKNOWN, OccupancyMsg
from telesim.nav import COST_INSCRIBED, COST_LETHAL, COST_UNKNOWN, build_costmap


def msg_from_cells(cells, res=0.05):
    cells = np.asarray(cells, dtype=np.int8)
    geom = GridGeometry(resolution=res, width=cells.shape[1], height=cells.shape[0], origin=Pose2D(0, 0))
    return OccupancyMsg(geometry=geom, cells=cells)


def all_free(width=11, height=11):
    return msg_from_cells(np.full((height, width), CELL_FREE))


def test_all_free_is_zero_cost():
    cm = build_costmap(all_free(), robot_radius=0.11)
    assert (cm.cost == 0).all()


def test_single_obstacle_bands():
    cells = np.full((17, 17), CELL_FREE, dtype=np.int8)
    cells[8, 8] = CELL_OCCUPIED
    cm = build_costmap(msg_from_cells(cells), robot_radius=0.11)
    assert cm.cost[8, 8] == COST_LETHAL
    # 4-neighbors at d = 0.05 and diagonals at d = 0.0707 are within 0.11.
    for r, c in [(8, 7), (8, 9), (7, 8), (9, 8), (7, 7), (9, 9), (7, 9), (9, 7)]:
        assert cm.cost[r, c] == COST_INSCRIBED
    # Two cells out cardinal: d = 0.10 <= 0.11, still inscribed.
    assert cm.cost[8, 10] == COST_INSCRIBED
    # d = 0.2 m: round(252 * exp(-10 * 0.09)) = 102.
    assert cm.cost[8, 12] == 102
    # Beyond the inflation radius (0.35 m = 7 cells): zero.
    assert cm.cost[8, 16] == 0


def test_unknown_cells_cost_128():
    cells = np.full((5, 5), CELL_UNKNOWN, dtype=np.int8)
    cm = build_costmap(msg_from_cells(cells), robot_radius=0.11)
    assert (cm.cost == COST_UNKNOWN).all()


def test_unknown_next_to_obstacle_keeps_inflation():
    cells = np.full((19, 19), CELL_UNKNOWN, dtype=np.int8)
    cells[2, 2] = CELL_OCCUPIED
    cm = build_costmap(msg_from_cells(cells), robot_radius=0.11)
    assert cm.cost[2, 2] == COST_LETHAL
    assert cm.cost[2, 3] == COST_INSCRIBED
    # Inside the inflation band the inflated cost dominates the unknown cost.
    assert cm.cost[2, 5] > COST_UNKNOWN
    # Far from any obstacle an unknown cell costs exactly 128.
    assert cm.cost[18, 18] == COST_UNKNOWN


def test_inflation_radius_must_cover_robot():
    with pytest.raises(ValueError):
        build_costmap(all_free(), robot_radius=0.5, inflation_radius=0.3)


def test_cost_monotone_in_distance():
    cells = np.full((41, 41), CELL_FREE, dtype=np.int8)
    cells[20, 20] = CELL_OCCUPIED
    cm = build_costmap(msg_from_cells(cells), robot_radius=0.11, inflation_radius=0.6)
    center = np.array([20, 20])
    dist = {}
    for r in range(41):
        for c in range(41):
            d = np.hypot(r - 20, c - 20) * 0.05
            dist.setdefault(round(d, 9), []).append(int(cm.cost[r, c]))
    ordered = sorted(dist.items())
    # Same distance -> same cost; cost non-increasing as distance grows.
    costs = []
    for d, vals in ordered:
        assert len(set(vals)) == 1
        costs.append(vals[0])
    assert all(a >= b for a, b in zip(costs, costs[1:]))
