"""Simulated 2D LiDAR: batched ray casting against world segments."""

from __future__ import annotations

import numpy as np

from ..core import LaserScan, Pose2D, ScanConfig
from .robot import NEAR_FAR_SPLIT, NO_NOISE, SensorNoise
from .world import WorldModel


def simulate_scan(
    world: WorldModel,
    pose: Pose2D,
    config: ScanConfig = ScanConfig(),
    noise: SensorNoise = NO_NOISE,
    rng: np.random.Generator | None = None,
    stamp: float = 0.0,
) -> LaserScan:
    """Cast one full sweep from the robot pose.

    Ray i leaves at bearing theta + angle_min + i * angle_increment. The
    reading is the nearest segment intersection; anything closer than
    range_min or farther than range_max reads as no return. With noise
    enabled, valid returns get multiplicative Gaussian noise whose level
    depends on the true distance, then clip back into the valid band.
    """
    xmin, ymin, xmax, ymax = world.bounds
    if not (xmin <= pose.x <= xmax and ymin <= pose.y <= ymax):
        raise ValueError(f"scan pose ({pose.x}, {pose.y}) outside world bounds {world.bounds}")

    n = config.sample_count
    bearings = pose.theta + config.angle_min + config.angle_increment * np.arange(n)
    dirs = np.stack([np.cos(bearings), np.sin(bearings)], axis=1)  # (N, 2)

    distances = cast_rays(np.array([pose.x, pose.y]), dirs, world.segments())

    no_ret = config.no_return_value
    hit = (distances >= config.range_min) & (distances <= config.range_max)
    ranges = np.where(hit, distances, no_ret)

    noisy = noise.range_noise_rel > 0 or noise.range_noise_rel_far > 0
    if noisy and rng is not None:
        g = rng.standard_normal(n)
        rel = np.where(distances < NEAR_FAR_SPLIT, noise.range_noise_rel, noise.range_noise_rel_far)
        perturbed = distances * (1.0 + rel * g)
        perturbed = np.clip(perturbed, config.range_min, config.range_max)
        ranges = np.where(hit, perturbed, no_ret)

    return LaserScan(
        stamp=stamp,
        angle_min=config.angle_min,
        angle_increment=config.angle_increment,
        range_min=config.range_min,
        range_max=config.range_max,
        ranges=ranges,
    )


def cast_rays(origin: np.ndarray, dirs: np.ndarray, segments: np.ndarray) -> np.ndarray:
    """Nearest intersection distance per unit-direction ray; inf for misses.

    Solves origin + t*d = a + u*(b-a) for every (ray, segment) pair at once.
    """
    if segments.shape[0] == 0:
        return np.full(dirs.shape[0], np.inf)
    a = segments[:, 0, :]  # (S, 2)
    s = segments[:, 1, :] - a  # (S, 2)
    ap = a - origin  # (S, 2)

    # denom[i, j] = cross(d_i, s_j)
    denom = dirs[:, 0:1] * s[None, :, 1] - dirs[:, 1:2] * s[None, :, 0]  # (N, S)
    cross_ap_s = ap[:, 0] * s[:, 1] - ap[:, 1] * s[:, 0]  # (S,)
    # cross(ap_j, d_i)
    cross_ap_d = ap[None, :, 0] * dirs[:, 1:2] - ap[None, :, 1] * dirs[:, 0:1]  # (N, S)

    with np.errstate(divide="ignore", invalid="ignore"):
        t = cross_ap_s[None, :] / denom
        u = cross_ap_d / denom
    valid = (np.abs(denom) > 1e-12) & (t >= 0.0) & (u >= 0.0) & (u <= 1.0)
    t = np.where(valid, t, np.inf)
    return t.min(axis=1)
