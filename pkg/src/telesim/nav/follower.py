"""Pure-pursuit path following and goal arrival checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core import DEFAULT_V_MAX, DEFAULT_W_MAX, Pose2D, Twist, normalize_angle
from .planner import PlanPath

GOAL_TOL_POS = 0.10   # m
GOAL_TOL_ANG = 0.35   # rad


@dataclass(frozen=True)
class FollowParams:
    lookahead: float = 0.3
    k_heading: float = 2.0
    v_max: float = DEFAULT_V_MAX
    w_max: float = DEFAULT_W_MAX
    tol_pos: float = GOAL_TOL_POS
    tol_ang: float = GOAL_TOL_ANG


def goal_reached(
    pose: Pose2D,
    goal: Pose2D,
    tol_pos: float = GOAL_TOL_POS,
    tol_ang: float = GOAL_TOL_ANG,
    check_heading: bool = False,
) -> bool:
    """Arrival test; the heading check only applies when the goal carries a
    meaningful heading (check_heading)."""
    if pose.distance_to(goal) > tol_pos:
        return False
    if check_heading and abs(normalize_angle(pose.theta - goal.theta)) > tol_ang:
        return False
    return True


def _project_progress(pose: Pose2D, path: PlanPath) -> float:
    """Arc length along the path of the point closest to pose."""
    best_d = math.inf
    best_s = 0.0
    s = 0.0
    wps = path.waypoints
    if len(wps) == 1:
        return 0.0
    for a, b in zip(wps, wps[1:]):
        seg = (b.x - a.x, b.y - a.y)
        seg_len = math.hypot(*seg)
        if seg_len > 0:
            t = ((pose.x - a.x) * seg[0] + (pose.y - a.y) * seg[1]) / (seg_len * seg_len)
            t = min(max(t, 0.0), 1.0)
        else:
            t = 0.0
        px = a.x + t * seg[0]
        py = a.y + t * seg[1]
        d = math.hypot(pose.x - px, pose.y - py)
        if d < best_d:
            best_d = d
            best_s = s + t * seg_len
        s += seg_len
    return best_s


def point_at_progress(path: PlanPath, s: float) -> Pose2D:
    """Pose interpolated at arc length s, clamped to the path's ends."""
    wps = path.waypoints
    if len(wps) == 1 or s <= 0:
        return wps[0]
    acc = 0.0
    for a, b in zip(wps, wps[1:]):
        seg_len = a.distance_to(b)
        if acc + seg_len >= s and seg_len > 0:
            t = (s - acc) / seg_len
            return Pose2D(
                a.x + t * (b.x - a.x),
                a.y + t * (b.y - a.y),
                math.atan2(b.y - a.y, b.x - a.x),
            )
        acc += seg_len
    return wps[-1]


def follow_path(pose: Pose2D, path: PlanPath, params: FollowParams = FollowParams()) -> tuple[Twist, bool]:
    """Steer toward a lookahead waypoint; (zero twist, True) on arrival.

    The target is the first waypoint at least `lookahead` beyond the closest
    path point; past the last waypoint the path end itself is chased.
    """
    end = path.waypoints[-1]
    if goal_reached(pose, end, params.tol_pos, params.tol_ang):
        return Twist(0.0, 0.0), True

    progress = _project_progress(pose, path)
    target = end
    s = 0.0
    for a, b in zip(path.waypoints, path.waypoints[1:]):
        s += a.distance_to(b)
        if s - progress >= params.lookahead:
            target = b
            break

    dist = math.hypot(target.x - pose.x, target.y - pose.y)
    if dist < 1e-12:
        heading_err = 0.0
    else:
        bearing = math.atan2(target.y - pose.y, target.x - pose.x)
        heading_err = normalize_angle(bearing - pose.theta)
    w = min(max(params.k_heading * heading_err, -params.w_max), params.w_max)
    v = params.v_max * max(0.0, math.cos(heading_err))
    return Twist(v, w), False
