"""Replanning policy: refresh the path on goal change, staleness, or blockage."""

from __future__ import annotations

import math

from ..core import Pose2D
from .costmap import COST_INSCRIBED, Costmap
from .planner import DEFAULT_COST_WEIGHT, PlanPath, plan_shortest_path

REPLAN_PERIOD = 2.0  # s


class PathMaintainer:
    """Owns the current plan and decides when it must be recomputed.

    Triggers: (a) a waypoint now sits on an inscribed/lethal cell,
    (b) the plan is older than the replan period, (c) the goal changed.
    Planner errors clear the stored path so the next call retries.
    """

    def __init__(self, cost_weight: float = DEFAULT_COST_WEIGHT, replan_period: float = REPLAN_PERIOD):
        self.cost_weight = cost_weight
        self.replan_period = replan_period
        self.path: PlanPath | None = None
        self.goal: Pose2D | None = None
        self.planned_at = -math.inf

    def invalidate(self) -> None:
        self.path = None
        self.goal = None
        self.planned_at = -math.inf

    def _path_blocked(self, costmap: Costmap) -> bool:
        geom = costmap.geometry
        for w in self.path.waypoints:
            cell = geom.cell_at(w.x, w.y)
            if costmap.cost[cell.row, cell.col] >= COST_INSCRIBED:
                return True
        return False

    def replan_if_needed(
        self,
        costmap: Costmap,
        pose: Pose2D,
        goal: Pose2D,
        now: float,
    ) -> tuple[PlanPath, bool]:
        """Returns (path, replanned). Raises planner errors after clearing
        state, so the caller can stop and retry on its next cycle."""
        need = (
            self.path is None
            or self.goal != goal
            or now - self.planned_at >= self.replan_period
            or self._path_blocked(costmap)
        )
        if not need:
            return self.path, False
        try:
            self.path = plan_shortest_path(costmap, pose, goal, self.cost_weight, stamp=now)
        except Exception:
            self.invalidate()
            raise
        self.goal = goal
        self.planned_at = now
        return self.path, True
