"""Grid indexing: world<->cell transforms and discrete line traversal."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .geometry import Pose2D


class GridBoundsError(ValueError):
    """A world point or cell index falls outside the grid."""


class GridIndex(NamedTuple):
    col: int
    row: int


def world_to_grid(
    x: float,
    y: float,
    origin: Pose2D,
    resolution: float,
    width: int | None = None,
    height: int | None = None,
) -> GridIndex:
    """Map a world point to the cell containing it.

    Origin is the world position of the grid's lower-left corner; cells are
    row-major with y increasing along rows. Raises GridBoundsError for points
    left/below the origin or, when width/height are given, past the far edge.
    Non-finite coordinates raise ValueError.
    """
    if resolution <= 0:
        raise ValueError(f"resolution must be > 0, got {resolution}")
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"coordinates must be finite, got ({x!r}, {y!r})")
    col = math.floor((x - origin.x) / resolution)
    row = math.floor((y - origin.y) / resolution)
    if col < 0 or row < 0:
        raise GridBoundsError(f"point ({x}, {y}) is outside the grid (cell {col}, {row})")
    if (width is not None and col >= width) or (height is not None and row >= height):
        raise GridBoundsError(f"point ({x}, {y}) maps to cell ({col}, {row}) beyond {width}x{height}")
    return GridIndex(col, row)


def grid_to_world(index: GridIndex, origin: Pose2D, resolution: float) -> tuple[float, float]:
    """Center point of a cell, the inverse of world_to_grid up to resolution/2."""
    col, row = index
    return (
        origin.x + (col + 0.5) * resolution,
        origin.y + (row + 0.5) * resolution,
    )


def raster_line(a: GridIndex, b: GridIndex) -> list[GridIndex]:
    """Cells crossed by the segment between the centers of a and b, in order.

    Walks cell-boundary crossings parametrically; an exact corner crossing
    steps diagonally. Consecutive cells are 4- or 8-adjacent, the first cell
    is a and the last is b. Crossing parameters are recomputed from the
    half-integer endpoints each step so corner ties compare exactly.
    """
    cells = [a]
    if a == b:
        return cells
    x0 = a.col + 0.5
    y0 = a.row + 0.5
    dx = float(b.col - a.col)
    dy = float(b.row - a.row)
    col, row = a.col, a.row
    step_c = 1 if dx > 0 else -1
    step_r = 1 if dy > 0 else -1
    # Next boundary coordinate on the travel side of the current cell.
    bx = col + (1 if dx > 0 else 0)
    by = row + (1 if dy > 0 else 0)
    while (col, row) != (b.col, b.row):
        t_col = (bx - x0) / dx if dx != 0.0 else math.inf
        t_row = (by - y0) / dy if dy != 0.0 else math.inf
        if t_col <= t_row:
            col += step_c
            bx += step_c
        if t_row <= t_col:
            row += step_r
            by += step_r
        cells.append(GridIndex(col, row))
    return cells


@dataclass(frozen=True)
class GridGeometry:
    """Shared geometry header for occupancy grids and costmaps."""

    resolution: float
    width: int
    height: int
    origin: Pose2D

    def __post_init__(self) -> None:
        if self.resolution <= 0:
            raise ValueError(f"resolution must be > 0, got {self.resolution}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"grid must be non-empty, got {self.width}x{self.height}")

    def cell_at(self, x: float, y: float) -> GridIndex:
        return world_to_grid(x, y, self.origin, self.resolution, self.width, self.height)

    def center_of(self, index: GridIndex) -> tuple[float, float]:
        return grid_to_world(index, self.origin, self.resolution)

    def contains(self, index: GridIndex) -> bool:
        return 0 <= index.col < self.width and 0 <= index.row < self.height

    def as_dict(self) -> dict:
        return {
            "resolution": self.resolution,
            "width": self.width,
            "height": self.height,
            "origin": self.origin.as_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GridGeometry":
        return cls(
            resolution=float(d["resolution"]),
            width=int(d["width"]),
            height=int(d["height"]),
            origin=Pose2D.from_dict(d["origin"]),
        )
