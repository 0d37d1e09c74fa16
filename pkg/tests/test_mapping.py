import math

import numpy as np
import pytest

from telesim.core import GridGeometry, LaserScan, Pose2D, ScanConfig
from telesim.mapping import (
    CELL_FREE,
    CELL_OCCUPIED,
    CELL_UNKNOWN,
    L_FREE,
    L_MAX,
    L_OCC,
    OccupancyGrid,
    OccupancyMsg,
    classify,
    integrate_scan,
    integrate_scan_reference,
)
from telesim.sim import WorldModel, simulate_scan


def make_grid(width=60, height=60, res=0.05):
    return OccupancyGrid.blank(GridGeometry(resolution=res, width=width, height=height, origin=Pose2D(0, 0)))


def single_ray_scan(r, range_max=12.0):
    return LaserScan(
        stamp=0.0,
        angle_min=0.0,
        angle_increment=2 * math.pi,
        range_min=0.15,
        range_max=range_max,
        ranges=np.array([r]),
    )


def cell_center_pose(grid, col, row, theta=0.0):
    x, y = grid.geometry.center_of((col, row))
    return Pose2D(x, y, theta)


def test_all_no_return_marks_free_disk_no_occupied():
    grid = make_grid(width=100, height=100)
    cfg = ScanConfig(sample_count=90, range_max=1.0)
    world = WorldModel(bounds=(0, 0, 5, 5))
    pose = cell_center_pose(grid, 50, 50)
    scan = simulate_scan(world, pose, cfg)
    assert not scan.hit_mask().any()
    integrate_scan(grid, pose, scan)
    assert (grid.logodds <= 0).all()
    assert grid.logodds[50, 50] < 0
    # A cell on the ray at half range is free; far corners untouched.
    assert grid.logodds[50, 60] < 0
    assert grid.logodds[0, 0] == 0.0


def test_single_ray_cell_counts():
    grid = make_grid()
    pose = cell_center_pose(grid, 20, 20)
    integrate_scan(grid, pose, single_ray_scan(1.0))
    # Hit point lands 20 cells down-range: 19 strictly-between cells plus the
    # robot cell are decremented, the hit cell is incremented.
    assert grid.logodds[20, 40] == pytest.approx(L_OCC)
    between = grid.logodds[20, 21:40]
    assert np.allclose(between, L_FREE)
    assert grid.logodds[20, 20] == pytest.approx(L_FREE)
    assert np.count_nonzero(grid.logodds) == 21


def test_hit_cell_saturates_after_five_scans():
    grid = make_grid()
    pose = cell_center_pose(grid, 20, 20)
    for i in range(5):
        integrate_scan(grid, pose, single_ray_scan(1.0))
        expected = min((i + 1) * L_OCC, L_MAX)
        assert grid.logodds[20, 40] == pytest.approx(expected)
    assert grid.logodds[20, 40] == L_MAX


def test_rays_exiting_grid_truncated():
    grid = make_grid(width=30, height=30)
    pose = cell_center_pose(grid, 15, 15)
    integrate_scan(grid, pose, single_ray_scan(12.5, range_max=12.0))  # no return, sweeps 12 m
    # Free marks stop at the border; nothing raised, nothing occupied.
    assert (grid.logodds <= 0).all()
    assert grid.logodds[15, 29] < 0


def test_monotone_evidence():
    grid = make_grid()
    pose = cell_center_pose(grid, 20, 20)
    prev_hit = 0.0
    prev_free = 0.0
    for _ in range(12):
        integrate_scan(grid, pose, single_ray_scan(1.0))
        hit_cell = grid.logodds[20, 40]
        free_cell = grid.logodds[20, 30]
        assert hit_cell >= prev_hit
        assert free_cell <= prev_free
        prev_hit, prev_free = hit_cell, free_cell


@pytest.mark.parametrize("seed", range(8))
def test_batched_integrator_matches_reference(seed):
    rng = np.random.default_rng(seed)
    fast = make_grid(width=40, height=35)
    slow = make_grid(width=40, height=35)
    cfg_count = int(rng.integers(5, 40))
    for _ in range(3):
        pose = Pose2D(
            float(rng.uniform(0.1, 1.9)),
            float(rng.uniform(0.1, 1.6)),
            float(rng.uniform(-math.pi, math.pi)),
        )
        ranges = rng.uniform(0.05, 14.0, size=cfg_count)
        scan = LaserScan(
            stamp=0.0,
            angle_min=-math.pi,
            angle_increment=2 * math.pi / cfg_count,
            range_min=0.15,
            range_max=12.0,
            ranges=ranges,
        )
        integrate_scan(fast, pose, scan)
        integrate_scan_reference(slow, pose, scan)
    assert np.array_equal(fast.logodds != 0, slow.logodds != 0)
    assert np.allclose(fast.logodds, slow.logodds, atol=1e-9, rtol=0)


def test_classify_fresh_grid_unknown():
    msg = classify(make_grid(width=4, height=4))
    assert (msg.cells == CELL_UNKNOWN).all()


def test_classify_thresholds():
    grid = make_grid(width=3, height=1)
    grid.logodds[0, 0] = 4.0   # p ~ 0.982 > 0.65
    grid.logodds[0, 1] = -4.0  # p ~ 0.018 < 0.25
    msg = classify(grid)
    assert msg.cells[0, 0] == CELL_OCCUPIED
    assert msg.cells[0, 1] == CELL_FREE
    assert msg.cells[0, 2] == CELL_UNKNOWN


def test_classify_rejects_bad_thresholds():
    with pytest.raises(ValueError):
        classify(make_grid(4, 4), p_occ_thresh=0.2, p_free_thresh=0.5)


def test_occupancy_msg_payload_roundtrip():
    grid = make_grid(width=8, height=6)
    grid.logodds[2, 3] = 4.0
    msg = classify(grid, stamp=1.5)
    again = OccupancyMsg.from_payload(msg.as_payload())
    assert np.array_equal(again.cells, msg.cells)
    assert again.geometry == msg.geometry
    assert again.stamp == 1.5
