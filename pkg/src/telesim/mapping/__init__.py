from .groundtruth import rasterize_ground_truth
from .mapio import MapFileError, load_map, save_map
from .occupancy import (
    CELL_FREE,
    CELL_OCCUPIED,
    CELL_UNKNOWN,
    DEFAULT_RESOLUTION,
    L_FREE,
    L_MAX,
    L_MIN,
    L_OCC,
    P_FREE_THRESH,
    P_OCC_THRESH,
    OccupancyGrid,
    OccupancyMsg,
    classify,
    integrate_scan,
    integrate_scan_reference,
)

__all__ = [
    "rasterize_ground_truth",
    "MapFileError",
    "load_map",
    "save_map",
    "CELL_FREE",
    "CELL_OCCUPIED",
    "CELL_UNKNOWN",
    "DEFAULT_RESOLUTION",
    "L_FREE",
    "L_MAX",
    "L_MIN",
    "L_OCC",
    "P_FREE_THRESH",
    "P_OCC_THRESH",
    "OccupancyGrid",
    "OccupancyMsg",
    "classify",
    "integrate_scan",
    "integrate_scan_reference",
]
