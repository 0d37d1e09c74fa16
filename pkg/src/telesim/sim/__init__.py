from .clock import EventScheduler, PeriodicTask
from .robot import (
    CONTROL_DT,
    NEAR_FAR_SPLIT,
    NO_NOISE,
    RobotState,
    SensorNoise,
    integrate_pose,
    read_odometry,
    step_robot,
)
from .sensors import cast_rays, simulate_scan
from .world import (
    DEFAULT_ROBOT_RADIUS,
    Obstacle,
    WorldFileError,
    WorldModel,
    advance_world,
    load_world,
    save_world,
)

__all__ = [
    "EventScheduler",
    "PeriodicTask",
    "CONTROL_DT",
    "NEAR_FAR_SPLIT",
    "NO_NOISE",
    "RobotState",
    "SensorNoise",
    "integrate_pose",
    "read_odometry",
    "step_robot",
    "cast_rays",
    "simulate_scan",
    "DEFAULT_ROBOT_RADIUS",
    "Obstacle",
    "WorldFileError",
    "WorldModel",
    "advance_world",
    "load_world",
    "save_world",
]
