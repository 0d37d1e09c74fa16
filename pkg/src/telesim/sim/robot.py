"""Differential-drive kinematics with collision blocking and odometry.

Unicycle Euler integration at a fixed tick. A step whose new position would
come within robot_radius of any solid geometry is blocked: the position
stays put (rotation still applies, so the robot can turn away from a wall)
and the collision flag is raised. Odometry integrates the twist that was
actually executed, perturbed multiplicatively by the configured noise, so
with zero noise it tracks ground truth exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..core import DEFAULT_V_MAX, DEFAULT_W_MAX, Pose2D, Twist, normalize_angle
from .world import WorldModel

CONTROL_DT = 0.02  # 50 Hz control tick
NEAR_FAR_SPLIT = 3.0  # m; range-noise level changes at this distance


@dataclass(frozen=True)
class SensorNoise:
    """Noise configuration; identical seed means identical traces."""

    range_noise_rel: float = 0.01       # relative std for ranges < NEAR_FAR_SPLIT
    range_noise_rel_far: float = 0.02   # relative std beyond
    odom_noise_std: tuple[float, float] = (0.0, 0.0)  # relative, per-step, on (v, w)
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.range_noise_rel < 0 or self.range_noise_rel_far < 0:
            raise ValueError("range noise levels must be >= 0")
        if any(s < 0 for s in self.odom_noise_std):
            raise ValueError("odometry noise stds must be >= 0")

    @property
    def has_odom_noise(self) -> bool:
        return any(s > 0 for s in self.odom_noise_std)


NO_NOISE = SensorNoise(range_noise_rel=0.0, range_noise_rel_far=0.0)


@dataclass(frozen=True)
class RobotState:
    pose: Pose2D
    odom_pose: Pose2D
    twist: Twist = Twist()
    stamp: float = 0.0
    collided: bool = False

    @classmethod
    def at(cls, pose: Pose2D, stamp: float = 0.0) -> "RobotState":
        return cls(pose=pose, odom_pose=pose, stamp=stamp)


def integrate_pose(pose: Pose2D, twist: Twist, dt: float) -> Pose2D:
    return Pose2D(
        x=pose.x + twist.v * math.cos(pose.theta) * dt,
        y=pose.y + twist.v * math.sin(pose.theta) * dt,
        theta=normalize_angle(pose.theta + twist.w * dt),
    )


def step_robot(
    state: RobotState,
    cmd: Twist,
    dt: float,
    world: WorldModel,
    noise: SensorNoise = NO_NOISE,
    rng: np.random.Generator | None = None,
    v_max: float = DEFAULT_V_MAX,
    w_max: float = DEFAULT_W_MAX,
) -> RobotState:
    """Advance the robot by one control tick against the current world."""
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    cmd = cmd.clamped(v_max, w_max)
    proposed = integrate_pose(state.pose, cmd, dt)
    if world.is_collision(proposed.x, proposed.y):
        executed = Twist(0.0, cmd.w)
        new_pose = Pose2D(state.pose.x, state.pose.y, proposed.theta)
        collided = True
    else:
        executed = cmd
        new_pose = proposed
        collided = False
    odom_pose = read_odometry(state.odom_pose, executed, noise, dt, rng)
    return RobotState(
        pose=new_pose,
        odom_pose=odom_pose,
        twist=executed,
        stamp=state.stamp + dt,
        collided=collided,
    )


def read_odometry(
    odom_pose: Pose2D,
    executed: Twist,
    noise: SensorNoise,
    dt: float,
    rng: np.random.Generator | None = None,
) -> Pose2D:
    """Integrate the executed twist into the odometry estimate.

    Noise is multiplicative on (v, w), so a stationary robot accumulates no
    drift regardless of the noise level.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    v, w = executed.v, executed.w
    if noise.has_odom_noise and rng is not None and not executed.is_zero():
        sv, sw = noise.odom_noise_std
        gv, gw = rng.standard_normal(2)
        v = float(v * (1.0 + sv * gv))
        w = float(w * (1.0 + sw * gw))
    return integrate_pose(odom_pose, Twist(v, w), dt)
