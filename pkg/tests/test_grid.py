import math

import pytest
from hypothesis import given, strategies as st

from telesim.core import GridBoundsError, GridIndex, Pose2D, grid_to_world, raster_line, world_to_grid

ORIGIN = Pose2D(0.0, 0.0)


def dense_line_oracle(a: GridIndex, b: GridIndex, samples: int = 20000) -> list[tuple[int, int]]:
    """Float line between cell centers sampled at sub-cell steps, deduplicated.

    Samples landing exactly on a cell boundary are skipped: they belong to
    both cells and carry no information about the visiting order.
    """
    x0, y0 = a.col + 0.5, a.row + 0.5
    dx, dy = b.col - a.col, b.row - a.row
    cells: list[tuple[int, int]] = []
    for k in range(samples):
        t = (k + 0.5) / samples
        x = x0 + dx * t
        y = y0 + dy * t
        if x == math.floor(x) or y == math.floor(y):
            continue
        c = (math.floor(x), math.floor(y))
        if not cells or cells[-1] != c:
            cells.append(c)
    return cells


def test_world_to_grid_origin_cell():
    assert world_to_grid(0.0, 0.0, ORIGIN, 0.05) == (0, 0)


def test_world_to_grid_hand_arithmetic():
    assert world_to_grid(1.0, 0.5, ORIGIN, 0.05) == (20, 10)


def test_world_to_grid_negative_is_out_of_bounds():
    with pytest.raises(GridBoundsError):
        world_to_grid(-0.01, 0.0, ORIGIN, 0.05)


def test_world_to_grid_beyond_extent():
    with pytest.raises(GridBoundsError):
        world_to_grid(1.0, 0.5, ORIGIN, 0.05, width=10, height=10)


def test_world_to_grid_bad_resolution_is_not_bounds_error():
    with pytest.raises(ValueError) as ei:
        world_to_grid(1.0, 1.0, ORIGIN, 0.0)
    assert not isinstance(ei.value, GridBoundsError)


def test_grid_center_roundtrip():
    idx = GridIndex(7, 3)
    x, y = grid_to_world(idx, ORIGIN, 0.05)
    assert world_to_grid(x, y, ORIGIN, 0.05) == idx


@given(
    st.floats(min_value=0.0, max_value=50.0),
    st.floats(min_value=0.0, max_value=50.0),
)
def test_world_grid_center_within_half_cell(x, y):
    res = 0.1
    idx = world_to_grid(x, y, ORIGIN, res)
    cx, cy = grid_to_world(idx, ORIGIN, res)
    assert abs(cx - x) <= res / 2 + 1e-12
    assert abs(cy - y) <= res / 2 + 1e-12


def test_raster_single_cell():
    assert raster_line(GridIndex(0, 0), GridIndex(0, 0)) == [(0, 0)]


def test_raster_axis_aligned():
    assert raster_line(GridIndex(0, 0), GridIndex(3, 0)) == [(0, 0), (1, 0), (2, 0), (3, 0)]


def test_raster_diagonal_with_corner_crossings():
    # Frozen from the dense-sampling oracle.
    assert raster_line(GridIndex(0, 0), GridIndex(5, 3)) == [
        (0, 0),
        (1, 0),
        (1, 1),
        (2, 1),
        (3, 2),
        (4, 2),
        (4, 3),
        (5, 3),
    ]


@given(
    st.integers(min_value=0, max_value=12),
    st.integers(min_value=0, max_value=12),
    st.integers(min_value=0, max_value=12),
    st.integers(min_value=0, max_value=12),
)
def test_raster_matches_dense_sampling_oracle(ax, ay, bx, by):
    a, b = GridIndex(ax, ay), GridIndex(bx, by)
    cells = raster_line(a, b)
    assert [tuple(c) for c in cells] == dense_line_oracle(a, b)


@given(
    st.integers(min_value=-30, max_value=30),
    st.integers(min_value=-30, max_value=30),
    st.integers(min_value=-30, max_value=30),
    st.integers(min_value=-30, max_value=30),
)
def test_raster_endpoints_and_adjacency(ax, ay, bx, by):
    a, b = GridIndex(ax, ay), GridIndex(bx, by)
    cells = raster_line(a, b)
    assert cells[0] == a
    assert cells[-1] == b
    assert len(set(cells)) == len(cells)
    for p, q in zip(cells, cells[1:]):
        assert max(abs(p.col - q.col), abs(p.row - q.row)) == 1
