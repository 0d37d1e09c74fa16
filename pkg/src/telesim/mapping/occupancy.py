"""Log-odds occupancy grid built from scans taken at known poses.

Evidence accumulates additively in log-odds with clamping. Rays are
rasterized between cell centers (robot cell to endpoint cell): traversed
cells collect the free increment, the endpoint of a returned ray collects
the occupied increment, and no-return rays sweep free space out to
range_max. The batched integrator steps every ray's grid traversal in
lockstep with the same boundary-crossing arithmetic as raster_line, so the
two produce identical cell sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import GridGeometry, GridIndex, LaserScan, Pose2D, raster_line

L_OCC = 0.85
L_FREE = -0.4
L_MIN = -4.0
L_MAX = 4.0

P_OCC_THRESH = 0.65
P_FREE_THRESH = 0.25

CELL_UNKNOWN = -1
CELL_FREE = 0
CELL_OCCUPIED = 100

DEFAULT_RESOLUTION = 0.05


@dataclass
class OccupancyGrid:
    geometry: GridGeometry
    logodds: np.ndarray  # (height, width) float64

    @classmethod
    def blank(cls, geometry: GridGeometry) -> "OccupancyGrid":
        return cls(geometry=geometry, logodds=np.zeros((geometry.height, geometry.width)))

    @classmethod
    def for_extent(
        cls,
        bounds: tuple[float, float, float, float],
        resolution: float = DEFAULT_RESOLUTION,
        pad_cells: int = 2,
    ) -> "OccupancyGrid":
        """Fixed-extent grid covering a world bounding box.

        The grid extends pad_cells beyond the box on every side so walls
        lying exactly on the boundary still rasterize inside the grid
        (otherwise their endpoint cells fall off the edge and the border
        never registers as occupied)."""
        xmin, ymin, xmax, ymax = bounds
        width = max(1, math.ceil((xmax - xmin) / resolution)) + 2 * pad_cells
        height = max(1, math.ceil((ymax - ymin) / resolution)) + 2 * pad_cells
        origin = Pose2D(xmin - pad_cells * resolution, ymin - pad_cells * resolution)
        geom = GridGeometry(resolution=resolution, width=width, height=height, origin=origin)
        return cls.blank(geom)

    def probabilities(self) -> np.ndarray:
        return 1.0 / (1.0 + np.exp(-self.logodds))

    def copy(self) -> "OccupancyGrid":
        return OccupancyGrid(geometry=self.geometry, logodds=self.logodds.copy())


@dataclass(frozen=True)
class OccupancyMsg:
    """Tri-state export of the grid: -1 unknown, 0 free, 100 occupied."""

    geometry: GridGeometry
    cells: np.ndarray  # (height, width) int8
    stamp: float = 0.0

    def as_payload(self) -> dict:
        import base64

        return {
            "stamp": self.stamp,
            **self.geometry.as_dict(),
            "cells": base64.b64encode(self.cells.astype(np.int8).tobytes()).decode("ascii"),
        }

    @classmethod
    def from_payload(cls, d: dict) -> "OccupancyMsg":
        import base64

        geom = GridGeometry.from_dict(d)
        raw = base64.b64decode(d["cells"])
        cells = np.frombuffer(raw, dtype=np.int8).reshape(geom.height, geom.width).copy()
        return cls(geometry=geom, cells=cells, stamp=float(d.get("stamp", 0.0)))


def classify(
    grid: OccupancyGrid,
    p_occ_thresh: float = P_OCC_THRESH,
    p_free_thresh: float = P_FREE_THRESH,
    stamp: float = 0.0,
) -> OccupancyMsg:
    """Threshold cell probabilities into the tri-state map."""
    if not (0.0 < p_free_thresh < p_occ_thresh < 1.0):
        raise ValueError(f"thresholds must satisfy 0 < free < occ < 1, got {p_free_thresh}, {p_occ_thresh}")
    l_occ = math.log(p_occ_thresh / (1.0 - p_occ_thresh))
    l_free = math.log(p_free_thresh / (1.0 - p_free_thresh))
    cells = np.full(grid.logodds.shape, CELL_UNKNOWN, dtype=np.int8)
    cells[grid.logodds > l_occ] = CELL_OCCUPIED
    cells[grid.logodds < l_free] = CELL_FREE
    return OccupancyMsg(geometry=grid.geometry, cells=cells, stamp=stamp)


def _endpoint_cells(pose: Pose2D, scan: LaserScan, geom: GridGeometry) -> tuple[np.ndarray, ...]:
    """Per-ray reach, hit flag, and raw endpoint cell (may lie off-grid)."""
    n = scan.sample_count
    bearings = pose.theta + scan.angle_min + scan.angle_increment * np.arange(n)
    hit = scan.hit_mask()
    reach = np.where(hit, scan.ranges, scan.range_max)
    ex = pose.x + reach * np.cos(bearings)
    ey = pose.y + reach * np.sin(bearings)
    ecol = np.floor((ex - geom.origin.x) / geom.resolution).astype(np.int64)
    erow = np.floor((ey - geom.origin.y) / geom.resolution).astype(np.int64)
    return hit, ecol, erow


def integrate_scan(grid: OccupancyGrid, pose: Pose2D, scan: LaserScan) -> OccupancyGrid:
    """Fold one scan into the grid in place (also returns it).

    All rays advance through the grid in lockstep; rays leaving the grid are
    truncated at the border. Free/occupied increments accumulate per ray, so
    a cell crossed by several rays is updated once per crossing.
    """
    geom = grid.geometry
    start = geom.cell_at(pose.x, pose.y)
    hit, ecol, erow = _endpoint_cells(pose, scan, geom)
    n = hit.shape[0]

    logodds = grid.logodds
    x0 = start.col + 0.5
    y0 = start.row + 0.5
    dx = (ecol - start.col).astype(np.float64)
    dy = (erow - start.row).astype(np.float64)
    step_c = np.where(dx > 0, 1, -1).astype(np.int64)
    step_r = np.where(dy > 0, 1, -1).astype(np.int64)

    col = np.full(n, start.col, dtype=np.int64)
    row = np.full(n, start.row, dtype=np.int64)
    bx = (col + (dx > 0)).astype(np.float64)
    by = (row + (dy > 0)).astype(np.float64)

    at_end = (col == ecol) & (row == erow)
    # The start cell is swept free once per ray, except by rays whose
    # returned endpoint is the start cell itself.
    start_marks = int(np.count_nonzero(~(at_end & hit)))
    logodds[start.row, start.col] += L_FREE * start_marks

    # Drop finished rays from the working set as we go; free-cell ids are
    # collected and applied in one pass at the end.
    keep = ~at_end
    col, row, bx, by = col[keep], row[keep], bx[keep], by[keep]
    dx, dy, step_c, step_r, hit_w = dx[keep], dy[keep], step_c[keep], step_r[keep], hit[keep]
    end_c, end_r = ecol[keep], erow[keep]
    free_ids: list[np.ndarray] = []
    while col.size:
        with np.errstate(divide="ignore", invalid="ignore"):
            t_col = np.where(dx == 0, np.inf, (bx - x0) / np.where(dx == 0, 1.0, dx))
            t_row = np.where(dy == 0, np.inf, (by - y0) / np.where(dy == 0, 1.0, dy))
        step_col = t_col <= t_row
        step_row = t_row <= t_col
        col = col + step_c * step_col
        row = row + step_r * step_row
        bx = bx + step_c * step_col
        by = by + step_r * step_row

        alive = (col >= 0) & (col < geom.width) & (row >= 0) & (row < geom.height)
        at_end = (col == end_c) & (row == end_r)
        mark = alive & ~(at_end & hit_w)
        if mark.any():
            free_ids.append(row[mark] * geom.width + col[mark])
        keep = alive & ~at_end
        if not keep.all():
            col, row, bx, by = col[keep], row[keep], bx[keep], by[keep]
            dx, dy, step_c, step_r = dx[keep], dy[keep], step_c[keep], step_r[keep]
            hit_w, end_c, end_r = hit_w[keep], end_c[keep], end_r[keep]

    flat = logodds.reshape(-1)
    if free_ids:
        ids = np.concatenate(free_ids)
        flat += L_FREE * np.bincount(ids, minlength=flat.size)
    occ = hit & (ecol >= 0) & (ecol < geom.width) & (erow >= 0) & (erow < geom.height)
    if occ.any():
        occ_ids = erow[occ] * geom.width + ecol[occ]
        flat += L_OCC * np.bincount(occ_ids, minlength=flat.size)

    np.clip(logodds, L_MIN, L_MAX, out=logodds)
    return grid


def integrate_scan_reference(grid: OccupancyGrid, pose: Pose2D, scan: LaserScan) -> OccupancyGrid:
    """Per-ray raster_line integrator; the slow twin of integrate_scan."""
    geom = grid.geometry
    start = geom.cell_at(pose.x, pose.y)
    hit, ecol, erow = _endpoint_cells(pose, scan, geom)
    logodds = grid.logodds
    for i in range(hit.shape[0]):
        end = GridIndex(int(ecol[i]), int(erow[i]))
        cells = raster_line(start, end)
        free_cells = cells[:-1] if hit[i] else cells
        for c in free_cells:
            if 0 <= c.col < geom.width and 0 <= c.row < geom.height:
                logodds[c.row, c.col] += L_FREE
            else:
                break
        if hit[i] and 0 <= end.col < geom.width and 0 <= end.row < geom.height:
            logodds[end.row, end.col] += L_OCC
    np.clip(logodds, L_MIN, L_MAX, out=logodds)
    return grid
