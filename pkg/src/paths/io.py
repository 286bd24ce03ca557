"""
Path serialization.

JSON: {"t0": ..., "dt": ..., "values": [...]} for grid paths and
{"segments": [[t, left, right], ...], "slope": ...} for event paths.
CSV: columns (t, x); event paths emit the left limit and the value at each jump.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path as FilePath
from typing import Any

import numpy as np

from src.core.exceptions import PathError
from src.paths.types import EventPath, GridPath, Path


def path_to_dict(path: Path) -> dict[str, Any]:
    if isinstance(path, GridPath):
        return {"t0": path.t0, "dt": path.dt, "values": path.values.tolist()}
    return {"segments": [list(s) for s in path.segments], "slope": path.slope}


def path_from_dict(data: dict[str, Any]) -> Path:
    if "values" in data:
        return GridPath(t0=float(data["t0"]), dt=float(data["dt"]), values=data["values"])
    if "segments" in data:
        segments = np.asarray(data["segments"], dtype=np.float64).reshape(-1, 3)
        return EventPath(
            times=segments[:, 0],
            left=segments[:, 1],
            right=segments[:, 2],
            slope=float(data["slope"]),
        )
    raise PathError("path JSON needs either 'values' or 'segments'")


def write_path_json(path: Path, target: FilePath) -> None:
    target.write_text(json.dumps(path_to_dict(path)))


def read_path_json(source: FilePath) -> Path:
    try:
        data = json.loads(source.read_text())
    except json.JSONDecodeError as e:
        raise PathError(f"invalid path JSON in {source}: {e}") from e
    return path_from_dict(data)


def path_rows(path: Path) -> list[tuple[float, float]]:
    if isinstance(path, GridPath):
        return list(zip(path.times.tolist(), path.values.tolist(), strict=True))
    rows: list[tuple[float, float]] = []
    for t, left, right in path.segments:
        if left != right:
            rows.append((t, left))
        rows.append((t, right))
    return rows


def write_path_csv(path: Path, target: FilePath) -> None:
    with target.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x"])
        writer.writerows(path_rows(path))
