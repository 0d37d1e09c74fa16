"""Occupancy grid persistence: JSON header + base64 raw log-odds.

Cells are stored as little-endian float64 bytes, so a load reproduces the
saved grid bit-exactly on any platform.
"""

from __future__ import annotations

import base64
import binascii
import json
from pathlib import Path

import numpy as np

from ..core import GridGeometry
from .occupancy import OccupancyGrid

MAP_SCHEMA = 1
ENCODING = "logodds-f8le-b64"


class MapFileError(ValueError):
    """Map document malformed, truncated, or from an unsupported schema."""


def save_map(grid: OccupancyGrid, path: str | Path) -> None:
    cells = np.ascontiguousarray(grid.logodds, dtype="<f8")
    doc = {
        "schema": MAP_SCHEMA,
        "encoding": ENCODING,
        **grid.geometry.as_dict(),
        "logodds": base64.b64encode(cells.tobytes()).decode("ascii"),
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True))


def load_map(path: str | Path) -> OccupancyGrid:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MapFileError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MapFileError(f"{path}: map document must be a JSON object")
    if doc.get("schema") != MAP_SCHEMA:
        raise MapFileError(f"{path}: unsupported map schema {doc.get('schema')!r}, expected {MAP_SCHEMA}")
    if doc.get("encoding") != ENCODING:
        raise MapFileError(f"{path}: unsupported encoding {doc.get('encoding')!r}")
    try:
        geometry = GridGeometry.from_dict(doc)
        raw = base64.b64decode(doc["logodds"], validate=True)
    except (KeyError, TypeError, ValueError, binascii.Error) as exc:
        raise MapFileError(f"{path}: malformed map document: {exc}") from exc
    expected = geometry.width * geometry.height * 8
    if len(raw) != expected:
        raise MapFileError(
            f"{path}: cell payload holds {len(raw)} bytes, expected {expected} "
            f"for {geometry.width}x{geometry.height}"
        )
    logodds = np.frombuffer(raw, dtype="<f8").reshape(geometry.height, geometry.width).copy()
    return OccupancyGrid(geometry=geometry, logodds=logodds)
