"""Message types crossing the bus and the link, plus the closed topic registry."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .geometry import Pose2D

TOPIC_SCAN = "/scan"
TOPIC_ODOM = "/odom"
TOPIC_MAP = "/map"
TOPIC_CMD_VEL = "/cmd_vel"
TOPIC_GOAL = "/move_base_simple/goal"
TOPIC_PLAN = "/plan"
TOPIC_MODE = "/mode"
TOPIC_PING = "/ping"
TOPIC_PONG = "/pong"

TOPICS = frozenset(
    {
        TOPIC_SCAN,
        TOPIC_ODOM,
        TOPIC_MAP,
        TOPIC_CMD_VEL,
        TOPIC_GOAL,
        TOPIC_PLAN,
        TOPIC_MODE,
        TOPIC_PING,
        TOPIC_PONG,
    }
)

# Topics each endpoint forwards onto the lossy link.
ROBOT_OUTBOUND = (TOPIC_ODOM, TOPIC_SCAN, TOPIC_MAP, TOPIC_PLAN, TOPIC_MODE, TOPIC_PING)
OPERATOR_OUTBOUND = (TOPIC_CMD_VEL, TOPIC_GOAL, TOPIC_PONG)


@dataclass(frozen=True)
class Envelope:
    """Topic-addressed message unit; seq increases per (source, topic)."""

    topic: str
    seq: int
    stamp: float
    payload: Any
    source: str = ""

    def as_wire_dict(self) -> dict:
        return {"topic": self.topic, "seq": self.seq, "stamp": self.stamp, "payload": self.payload}

    @classmethod
    def from_wire_dict(cls, d: dict, source: str = "") -> "Envelope":
        return cls(
            topic=str(d["topic"]),
            seq=int(d["seq"]),
            stamp=float(d["stamp"]),
            payload=d["payload"],
            source=source,
        )


@dataclass(frozen=True)
class ScanConfig:
    """Sensor header shared by every scan: RPLidar A1-class defaults."""

    sample_count: int = 1147
    range_min: float = 0.15
    range_max: float = 12.0
    angle_min: float = -math.pi
    frequency_hz: float = 5.5

    @property
    def angle_increment(self) -> float:
        return 2.0 * math.pi / self.sample_count

    @property
    def period(self) -> float:
        return 1.0 / self.frequency_hz

    @property
    def no_return_value(self) -> float:
        # Any reading beyond range_max encodes "no return".
        return self.range_max + 1.0


@dataclass(frozen=True)
class LaserScan:
    """One 360-degree sweep. ranges[i] is the reading at
    bearing theta + angle_min + i * angle_increment; readings beyond
    range_max mean no return."""

    stamp: float
    angle_min: float
    angle_increment: float
    range_min: float
    range_max: float
    ranges: np.ndarray

    def __post_init__(self) -> None:
        ranges = np.asarray(self.ranges, dtype=np.float64)
        ranges.setflags(write=False)
        object.__setattr__(self, "ranges", ranges)

    @property
    def sample_count(self) -> int:
        return int(self.ranges.shape[0])

    def hit_mask(self) -> np.ndarray:
        return (self.ranges >= self.range_min) & (self.ranges <= self.range_max)

    def as_payload(self) -> dict:
        return {
            "stamp": self.stamp,
            "angle_min": self.angle_min,
            "angle_increment": self.angle_increment,
            "range_min": self.range_min,
            "range_max": self.range_max,
            "ranges": [float(r) for r in self.ranges],
        }

    @classmethod
    def from_payload(cls, d: dict) -> "LaserScan":
        return cls(
            stamp=float(d["stamp"]),
            angle_min=float(d["angle_min"]),
            angle_increment=float(d["angle_increment"]),
            range_min=float(d["range_min"]),
            range_max=float(d["range_max"]),
            ranges=np.asarray(d["ranges"], dtype=np.float64),
        )


@dataclass(frozen=True)
class GoalMsg:
    """Operator-selected destination, always expressed in the map frame."""

    stamp: float
    pose: Pose2D
    frame: str = "map"

    def __post_init__(self) -> None:
        if self.frame != "map":
            raise ValueError(f"goal frame must be 'map', got {self.frame!r}")

    def as_payload(self) -> dict:
        return {"stamp": self.stamp, "frame": self.frame, "pose": self.pose.as_dict()}

    @classmethod
    def from_payload(cls, d: dict) -> "GoalMsg":
        return cls(stamp=float(d["stamp"]), pose=Pose2D.from_dict(d["pose"]), frame=str(d["frame"]))
