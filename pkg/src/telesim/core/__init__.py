from .geometry import DEFAULT_V_MAX, DEFAULT_W_MAX, ZERO_TWIST, Pose2D, Twist, normalize_angle
from .grid import GridBoundsError, GridGeometry, GridIndex, grid_to_world, raster_line, world_to_grid
from .messages import (
    OPERATOR_OUTBOUND,
    ROBOT_OUTBOUND,
    TOPIC_CMD_VEL,
    TOPIC_GOAL,
    TOPIC_MAP,
    TOPIC_MODE,
    TOPIC_ODOM,
    TOPIC_PING,
    TOPIC_PLAN,
    TOPIC_PONG,
    TOPIC_SCAN,
    TOPICS,
    Envelope,
    GoalMsg,
    LaserScan,
    ScanConfig,
)
from .bus import Subscription, TopicBus, UnknownTopicError

__all__ = [
    "DEFAULT_V_MAX",
    "DEFAULT_W_MAX",
    "ZERO_TWIST",
    "Pose2D",
    "Twist",
    "normalize_angle",
    "GridBoundsError",
    "GridGeometry",
    "GridIndex",
    "grid_to_world",
    "raster_line",
    "world_to_grid",
    "TOPICS",
    "TOPIC_SCAN",
    "TOPIC_ODOM",
    "TOPIC_MAP",
    "TOPIC_CMD_VEL",
    "TOPIC_GOAL",
    "TOPIC_PLAN",
    "TOPIC_MODE",
    "TOPIC_PING",
    "TOPIC_PONG",
    "ROBOT_OUTBOUND",
    "OPERATOR_OUTBOUND",
    "Envelope",
    "GoalMsg",
    "LaserScan",
    "ScanConfig",
    "Subscription",
    "TopicBus",
    "UnknownTopicError",
]
