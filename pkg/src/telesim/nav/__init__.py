from .costmap import (
    COST_FREE,
    COST_INSCRIBED,
    COST_LETHAL,
    COST_UNKNOWN,
    DEFAULT_COST_DECAY,
    DEFAULT_INFLATION_RADIUS,
    Costmap,
    build_costmap,
)
from .follower import (
    GOAL_TOL_ANG,
    GOAL_TOL_POS,
    FollowParams,
    follow_path,
    goal_reached,
    point_at_progress,
)
from .planner import (
    DEFAULT_COST_WEIGHT,
    GoalInCollisionError,
    NoPathError,
    PlanPath,
    nearest_traversable,
    path_cells,
    path_weight_exact,
    plan_shortest_path,
)
from .replan import REPLAN_PERIOD, PathMaintainer

__all__ = [
    "COST_FREE",
    "COST_INSCRIBED",
    "COST_LETHAL",
    "COST_UNKNOWN",
    "DEFAULT_COST_DECAY",
    "DEFAULT_INFLATION_RADIUS",
    "Costmap",
    "build_costmap",
    "GOAL_TOL_ANG",
    "GOAL_TOL_POS",
    "FollowParams",
    "follow_path",
    "goal_reached",
    "point_at_progress",
    "DEFAULT_COST_WEIGHT",
    "GoalInCollisionError",
    "NoPathError",
    "PlanPath",
    "nearest_traversable",
    "path_cells",
    "path_weight_exact",
    "plan_shortest_path",
    "REPLAN_PERIOD",
    "PathMaintainer",
]
