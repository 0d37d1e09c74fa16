"""Ground-truth 2D world: bounds, wall segments, and scripted obstacles.

The world boundary is solid: it blocks the robot and returns LiDAR echoes,
so an "empty" world is a closed room. Dynamic obstacles translate along a
closed waypoint loop at constant speed; their position is a pure function
of world time, which keeps runs reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..core import Pose2D

DEFAULT_ROBOT_RADIUS = 0.11


class WorldFileError(ValueError):
    """World document malformed or violating schema constraints."""


@dataclass
class Obstacle:
    """Convex polygon, optionally translated along a closed waypoint loop.

    The polygon is given at its start location; waypoints[0] anchors it, and
    the loop closes back from the last waypoint to the first.
    """

    polygon: np.ndarray
    waypoints: np.ndarray | None = None
    speed: float = 0.0

    def __post_init__(self) -> None:
        self.polygon = np.asarray(self.polygon, dtype=np.float64)
        if self.polygon.ndim != 2 or self.polygon.shape[0] < 3 or self.polygon.shape[1] != 2:
            raise WorldFileError(f"obstacle polygon must be (K>=3, 2), got {self.polygon.shape}")
        if self.waypoints is not None:
            self.waypoints = np.asarray(self.waypoints, dtype=np.float64)
            if self.waypoints.ndim != 2 or self.waypoints.shape[1] != 2:
                raise WorldFileError("obstacle waypoints must be a list of [x, y] points")
        if self.speed < 0:
            raise WorldFileError(f"obstacle speed must be >= 0, got {self.speed}")
        self._loop_lengths = None
        if self.is_dynamic:
            pts = np.vstack([self.waypoints, self.waypoints[:1]])
            self._loop_lengths = np.linalg.norm(np.diff(pts, axis=0), axis=1)
            if self._loop_lengths.sum() <= 0:
                raise WorldFileError("dynamic obstacle waypoint loop has zero length")

    @property
    def is_dynamic(self) -> bool:
        return self.waypoints is not None and len(self.waypoints) >= 2 and self.speed > 0

    def offset_at(self, t: float) -> np.ndarray:
        """Translation of the polygon at world time t relative to its start."""
        if not self.is_dynamic:
            return np.zeros(2)
        total = float(self._loop_lengths.sum())
        s = (self.speed * t) % total
        pts = self.waypoints
        n = len(pts)
        for i in range(n):
            leg = float(self._loop_lengths[i])
            if s <= leg or i == n - 1:
                a = pts[i]
                b = pts[(i + 1) % n]
                frac = s / leg if leg > 0 else 0.0
                return a + frac * (b - a) - pts[0]
            s -= leg
        return np.zeros(2)

    def polygon_at(self, t: float) -> np.ndarray:
        return self.polygon + self.offset_at(t)


def _polygon_edges(polygon: np.ndarray) -> np.ndarray:
    return np.stack([polygon, np.roll(polygon, -1, axis=0)], axis=1)


@dataclass
class WorldModel:
    bounds: tuple[float, float, float, float]
    walls: np.ndarray = field(default_factory=lambda: np.zeros((0, 2, 2)))
    obstacles: list[Obstacle] = field(default_factory=list)
    robot_start: Pose2D = field(default_factory=Pose2D)
    robot_radius: float = DEFAULT_ROBOT_RADIUS
    time: float = 0.0

    def __post_init__(self) -> None:
        xmin, ymin, xmax, ymax = self.bounds
        if not (xmax > xmin and ymax > ymin):
            raise WorldFileError(f"degenerate bounds {self.bounds}")
        if self.robot_radius <= 0:
            raise WorldFileError(f"robot_radius must be > 0, got {self.robot_radius}")
        self.walls = np.asarray(self.walls, dtype=np.float64).reshape(-1, 2, 2)
        self._border = np.array(
            [
                [[xmin, ymin], [xmax, ymin]],
                [[xmax, ymin], [xmax, ymax]],
                [[xmax, ymax], [xmin, ymax]],
                [[xmin, ymax], [xmin, ymin]],
            ]
        )
        self._check_inside_bounds()
        self._segment_cache: tuple[float, np.ndarray] | None = None

    def _check_inside_bounds(self) -> None:
        xmin, ymin, xmax, ymax = self.bounds
        pts = [self.walls.reshape(-1, 2)] if self.walls.size else []
        for ob in self.obstacles:
            pts.append(ob.polygon)
            if ob.waypoints is not None:
                # The polygon must stay inside along the whole loop.
                for wp in ob.waypoints:
                    pts.append(ob.polygon + (wp - ob.waypoints[0]))
        if pts:
            allp = np.vstack(pts)
            if (
                allp[:, 0].min() < xmin
                or allp[:, 0].max() > xmax
                or allp[:, 1].min() < ymin
                or allp[:, 1].max() > ymax
            ):
                raise WorldFileError("world geometry extends outside bounds")

    # -- queries -----------------------------------------------------------

    def segments(self) -> np.ndarray:
        """All solid segments at the current time: border, walls, obstacle edges."""
        if self._segment_cache is not None and self._segment_cache[0] == self.time:
            return self._segment_cache[1]
        parts = [self._border]
        if self.walls.size:
            parts.append(self.walls)
        for ob in self.obstacles:
            parts.append(_polygon_edges(ob.polygon_at(self.time)))
        segs = np.concatenate(parts, axis=0)
        self._segment_cache = (self.time, segs)
        return segs

    def distance_to_geometry(self, x: float, y: float) -> float:
        """Distance from a point to the nearest solid boundary; 0 inside an obstacle."""
        for ob in self.obstacles:
            if _point_in_convex_polygon(x, y, ob.polygon_at(self.time)):
                return 0.0
        segs = self.segments()
        return float(np.min(_point_segment_distances(x, y, segs)))

    def is_collision(self, x: float, y: float) -> bool:
        return self.distance_to_geometry(x, y) < self.robot_radius

    def advance(self, dt: float) -> "WorldModel":
        if dt <= 0:
            raise ValueError(f"dt must be > 0, got {dt}")
        self.time += dt
        return self

    # -- serialization -----------------------------------------------------

    def as_dict(self) -> dict:
        obs = []
        for ob in self.obstacles:
            entry: dict = {"polygon": ob.polygon.tolist()}
            if ob.waypoints is not None:
                entry["waypoints"] = ob.waypoints.tolist()
                entry["speed"] = ob.speed
            obs.append(entry)
        return {
            "schema": 1,
            "bounds": list(self.bounds),
            "walls": self.walls.tolist(),
            "obstacles": obs,
            "robot_start": self.robot_start.as_dict(),
            "robot_radius": self.robot_radius,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "WorldModel":
        if not isinstance(doc, dict):
            raise WorldFileError("world document must be a JSON object")
        if doc.get("schema") != 1:
            raise WorldFileError(f"unsupported world schema {doc.get('schema')!r}, expected 1")
        try:
            bounds = tuple(float(v) for v in doc["bounds"])
            if len(bounds) != 4:
                raise WorldFileError("bounds must be [xmin, ymin, xmax, ymax]")
            obstacles = [
                Obstacle(
                    polygon=entry["polygon"],
                    waypoints=entry.get("waypoints"),
                    speed=float(entry.get("speed", 0.0)),
                )
                for entry in doc.get("obstacles", [])
            ]
            return cls(
                bounds=bounds,
                walls=np.asarray(doc.get("walls", []), dtype=np.float64).reshape(-1, 2, 2),
                obstacles=obstacles,
                robot_start=Pose2D.from_dict(doc.get("robot_start", {"x": 0, "y": 0, "theta": 0})),
                robot_radius=float(doc.get("robot_radius", DEFAULT_ROBOT_RADIUS)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, WorldFileError):
                raise
            raise WorldFileError(f"malformed world document: {exc}") from exc


def load_world(path: str | Path) -> WorldModel:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise WorldFileError(f"{path}: not valid JSON: {exc}") from exc
    return WorldModel.from_dict(doc)


def save_world(world: WorldModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(world.as_dict(), indent=2, sort_keys=True))


def advance_world(world: WorldModel, dt: float) -> WorldModel:
    return world.advance(dt)


# -- geometry helpers -------------------------------------------------------


def _point_segment_distances(x: float, y: float, segs: np.ndarray) -> np.ndarray:
    a = segs[:, 0, :]
    b = segs[:, 1, :]
    ab = b - a
    ap = np.array([x, y]) - a
    denom = np.einsum("ij,ij->i", ab, ab)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(denom > 0, np.einsum("ij,ij->i", ap, ab) / np.where(denom > 0, denom, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[:, None] * ab
    d = closest - np.array([x, y])
    return np.hypot(d[:, 0], d[:, 1])


def _point_in_convex_polygon(x: float, y: float, polygon: np.ndarray) -> bool:
    a = polygon
    b = np.roll(polygon, -1, axis=0)
    cross = (b[:, 0] - a[:, 0]) * (y - a[:, 1]) - (b[:, 1] - a[:, 1]) * (x - a[:, 0])
    return bool(np.all(cross >= 0) or np.all(cross <= 0))
