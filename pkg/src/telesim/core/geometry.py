"""Planar poses, velocity commands, and angle arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_V_MAX = 0.5   # m/s
DEFAULT_W_MAX = 1.5   # rad/s


def normalize_angle(theta: float) -> float:
    """Reduce an angle to the (-pi, pi] interval.

    Raises ValueError for non-finite input.
    """
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    wrapped = math.fmod(theta, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    elif wrapped > math.pi:
        wrapped -= 2.0 * math.pi
    return wrapped


@dataclass(frozen=True)
class Pose2D:
    """Position (m) and heading (rad) in the map frame.

    theta is normalized to (-pi, pi] on construction.
    """

    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    def distance_to(self, other: "Pose2D") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def heading_error_to(self, other: "Pose2D") -> float:
        return normalize_angle(other.theta - self.theta)

    def as_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "theta": self.theta}

    @classmethod
    def from_dict(cls, d: dict) -> "Pose2D":
        return cls(float(d["x"]), float(d["y"]), float(d.get("theta", 0.0)))


@dataclass(frozen=True)
class Twist:
    """Velocity command: linear v (m/s) and angular w (rad/s)."""

    v: float = 0.0
    w: float = 0.0

    def clamped(self, v_max: float = DEFAULT_V_MAX, w_max: float = DEFAULT_W_MAX) -> "Twist":
        return Twist(
            v=min(max(self.v, -v_max), v_max),
            w=min(max(self.w, -w_max), w_max),
        )

    def is_zero(self) -> bool:
        return self.v == 0.0 and self.w == 0.0

    def as_dict(self) -> dict:
        return {"v": self.v, "w": self.w}

    @classmethod
    def from_dict(cls, d: dict) -> "Twist":
        return cls(float(d["v"]), float(d["w"]))


ZERO_TWIST = Twist(0.0, 0.0)
