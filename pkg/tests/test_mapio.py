import math

import numpy as np
import pytest

from telesim.core import GridGeometry, LaserScan, Pose2D
from telesim.mapping import MapFileError, OccupancyGrid, integrate_scan, load_map, save_map


def small_grid():
    return OccupancyGrid.blank(GridGeometry(resolution=0.05, width=30, height=20, origin=Pose2D(-1, -1)))


def test_fresh_grid_roundtrip(tmp_path):
    grid = small_grid()
    path = tmp_path / "m.json"
    save_map(grid, path)
    loaded = load_map(path)
    assert loaded.geometry == grid.geometry
    assert np.array_equal(loaded.logodds, grid.logodds)


def test_roundtrip_after_many_integrations_bit_exact(tmp_path):
    grid = small_grid()
    rng = np.random.default_rng(0)
    for i in range(100):
        pose = Pose2D(-0.5 + 0.3 * math.sin(i * 0.1), -0.4, i * 0.07)
        scan = LaserScan(
            stamp=float(i),
            angle_min=0.0,
            angle_increment=math.pi / 4,
            range_min=0.15,
            range_max=12.0,
            ranges=rng.uniform(0.1, 13.0, size=8),
        )
        integrate_scan(grid, pose, scan)
    path = tmp_path / "m.json"
    save_map(grid, path)
    loaded = load_map(path)
    assert loaded.logodds.tobytes() == grid.logodds.tobytes()


def test_truncated_file_rejected(tmp_path):
    grid = small_grid()
    path = tmp_path / "m.json"
    save_map(grid, path)
    text = path.read_text()
    path.write_text(text[: len(text) // 2])
    with pytest.raises(MapFileError):
        load_map(path)


def test_wrong_schema_rejected(tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"schema": 2, "encoding": "logodds-f8le-b64"}')
    with pytest.raises(MapFileError, match="schema"):
        load_map(path)


def test_payload_length_mismatch_rejected(tmp_path):
    grid = small_grid()
    path = tmp_path / "m.json"
    save_map(grid, path)
    import json

    doc = json.loads(path.read_text())
    doc["width"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(MapFileError, match="bytes"):
        load_map(path)
