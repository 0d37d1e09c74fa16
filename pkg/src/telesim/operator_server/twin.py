"""Operator-side virtual twin: telemetry-driven, path-predicted during
outages, reconciled smoothly on reconnection.

While odometry is fresh the twin mirrors it. Once telemetry goes stale the
twin advances along the last cached plan at constant speed from wherever
it was, mimicking the robot. The first fresh pose after a predicted spell
starts a timed interpolation from the predicted pose to the live one; the
gap is recorded as that reconnection's teleport distance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from ..core import DEFAULT_V_MAX, Pose2D, normalize_angle
from ..nav.follower import _project_progress, point_at_progress
from ..nav.planner import PlanPath

STALENESS_WINDOW = 0.5  # s without /odom before prediction starts
DEFAULT_V_PRED = DEFAULT_V_MAX
DEFAULT_SMOOTHING_T = 1.0


class TwinSource(enum.Enum):
    TELEMETRY = "telemetry"
    PREDICTED = "predicted"


@dataclass
class TwinState:
    pose: Pose2D | None = None
    source: TwinSource = TwinSource.TELEMETRY
    last_telemetry_at: float = -float("inf")
    path_cache: PlanPath | None = None
    path_progress: float = 0.0


def _lerp_pose(a: Pose2D, b: Pose2D, alpha: float) -> Pose2D:
    alpha = min(max(alpha, 0.0), 1.0)
    return Pose2D(
        a.x + alpha * (b.x - a.x),
        a.y + alpha * (b.y - a.y),
        normalize_angle(a.theta + alpha * normalize_angle(b.theta - a.theta)),
    )


class TwinTracker:
    def __init__(
        self,
        v_pred: float = DEFAULT_V_PRED,
        smoothing_t: float = DEFAULT_SMOOTHING_T,
        staleness: float = STALENESS_WINDOW,
        on_reconcile: Callable[[float, float], None] | None = None,
        display_speed_max: float | None = None,
    ):
        self.v_pred = v_pred
        self.smoothing_t = smoothing_t
        self.staleness = staleness
        self.on_reconcile = on_reconcile
        # Telemetry arrives in 10 Hz steps while frames render at 20 Hz; the
        # displayed pose chases the live one at bounded speed so per-frame
        # displacement never exceeds max(v_max, v_pred)*dt (+ the
        # reconciliation allowance while a smoothing window is active).
        self.display_speed_max = display_speed_max if display_speed_max is not None else max(DEFAULT_V_PRED, v_pred)
        self.state = TwinState()
        self.teleports: list[float] = []
        self._live_pose: Pose2D | None = None
        self._reconcile_from: Pose2D | None = None
        self._reconcile_started = -float("inf")
        self._last_tick = None
        self._last_teleport = 0.0

    # -- telemetry ingestion --------------------------------------------------

    def ingest_odom(self, pose: Pose2D, t: float) -> None:
        state = self.state
        if state.source is TwinSource.PREDICTED and state.pose is not None:
            teleport = state.pose.distance_to(pose)
            self.teleports.append(teleport)
            self._last_teleport = teleport
            if self.on_reconcile is not None:
                self.on_reconcile(t, teleport)
            if self.smoothing_t > 0:
                self._reconcile_from = state.pose
                self._reconcile_started = t
        self._live_pose = pose
        state.last_telemetry_at = t
        state.source = TwinSource.TELEMETRY
        if state.pose is None:
            state.pose = pose
        if state.path_cache is not None:
            state.path_progress = _project_progress(pose, state.path_cache)

    def ingest_plan(self, path: PlanPath, t: float) -> None:
        self.state.path_cache = path
        anchor = self.state.pose if self.state.pose is not None else path.waypoints[0]
        self.state.path_progress = _project_progress(anchor, path)

    # -- per-frame update -------------------------------------------------------

    def tick(self, now: float) -> TwinState:
        state = self.state
        dt = 0.0 if self._last_tick is None else now - self._last_tick
        self._last_tick = now
        if state.pose is None:
            return state  # nothing heard yet
        prev_pose = state.pose

        stale = now - state.last_telemetry_at > self.staleness
        dt_pred = dt
        if state.source is TwinSource.TELEMETRY and stale:
            state.source = TwinSource.PREDICTED
            self._reconcile_from = None
            dt_pred = 0.0  # prediction accrues from this tick onward
            if state.path_cache is not None:
                state.path_progress = _project_progress(state.pose, state.path_cache)

        if state.source is TwinSource.PREDICTED:
            if state.path_cache is not None:
                state.path_progress += self.v_pred * dt_pred
                target = point_at_progress(state.path_cache, state.path_progress)
                state.pose = self._rate_limit(prev_pose, target, dt, now)
            # without a cached path the twin holds position
            return state

        # telemetry-driven, possibly inside the reconciliation window
        live = self._live_pose
        if self._reconcile_from is not None:
            alpha = (now - self._reconcile_started) / self.smoothing_t if self.smoothing_t > 0 else 1.0
            if alpha >= 1.0:
                self._reconcile_from = None
                target = live
            else:
                target = _lerp_pose(self._reconcile_from, live, alpha)
        else:
            target = live
        state.pose = self._rate_limit(prev_pose, target, dt, now)
        return state

    def _rate_limit(self, prev: Pose2D, target: Pose2D, dt: float, now: float) -> Pose2D:
        """Clamp per-tick displacement to the continuity bound. A hard snap
        (smoothing_t = 0) is exempt: that mode exists to expose the jump."""
        if dt <= 0:
            return target
        if self.smoothing_t <= 0:
            return target
        budget = self.display_speed_max * dt
        if now - self._reconcile_started <= self.smoothing_t:
            budget += (self._last_teleport / self.smoothing_t) * dt
        gap = prev.distance_to(target)
        if gap <= budget or gap == 0.0:
            return target
        frac = budget / gap
        return _lerp_pose(prev, target, frac)
