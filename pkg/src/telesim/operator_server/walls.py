"""Wall segments for the console: scan returns linked into short chains.

Purely presentational. Consecutive scan endpoints closer than the gap
threshold are chained; chains are decimated to keep frames small. The
latest scan replaces the previous batch, and a batch older than the expiry
(no scans during an outage) disappears.
"""

from __future__ import annotations

import math

import numpy as np

from ..core import LaserScan, Pose2D

MAX_POINT_GAP = 0.15  # m between consecutive endpoints on one wall
EXPIRY = 5.0          # s without re-observation
DECIMATE = 6          # keep every Nth chain vertex


class WallSegmentSet:
    def __init__(self, max_gap: float = MAX_POINT_GAP, expiry: float = EXPIRY, decimate: int = DECIMATE):
        self.max_gap = max_gap
        self.expiry = expiry
        self.decimate = max(1, decimate)
        self._segments: list[tuple[float, float, float, float]] = []
        self._built_at = -float("inf")

    def ingest_scan(self, scan: LaserScan, pose: Pose2D, t: float) -> None:
        n = scan.sample_count
        bearings = pose.theta + scan.angle_min + scan.angle_increment * np.arange(n)
        hits = scan.hit_mask()
        xs = pose.x + scan.ranges * np.cos(bearings)
        ys = pose.y + scan.ranges * np.sin(bearings)

        segments: list[tuple[float, float, float, float]] = []
        chain: list[tuple[float, float]] = []

        def flush() -> None:
            if len(chain) < 2:
                chain.clear()
                return
            pts = chain[:: self.decimate]
            if pts[-1] != chain[-1]:
                pts.append(chain[-1])
            for a, b in zip(pts, pts[1:]):
                segments.append((a[0], a[1], b[0], b[1]))
            chain.clear()

        for i in range(n):
            if not hits[i]:
                flush()
                continue
            p = (float(xs[i]), float(ys[i]))
            if chain and math.hypot(p[0] - chain[-1][0], p[1] - chain[-1][1]) > self.max_gap:
                flush()
            chain.append(p)
        flush()

        self._segments = segments
        self._built_at = t

    def segments_at(self, now: float) -> list[tuple[float, float, float, float]]:
        if now - self._built_at > self.expiry:
            return []
        return self._segments
