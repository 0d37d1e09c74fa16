from .scenario import RunMetrics, ScenarioConfig, ScenarioError, ScriptEvent, Simulation, run_scenario
from .server import OperatorConfig, OperatorServer
from .twin import (
    DEFAULT_SMOOTHING_T,
    DEFAULT_V_PRED,
    STALENESS_WINDOW,
    TwinSource,
    TwinState,
    TwinTracker,
)
from .walls import WallSegmentSet

__all__ = [
    "RunMetrics",
    "ScenarioConfig",
    "ScenarioError",
    "ScriptEvent",
    "Simulation",
    "run_scenario",
    "OperatorConfig",
    "OperatorServer",
    "DEFAULT_SMOOTHING_T",
    "DEFAULT_V_PRED",
    "STALENESS_WINDOW",
    "TwinSource",
    "TwinState",
    "TwinTracker",
    "WallSegmentSet",
]
