"""Plot-ready CSV and JSON writers.

Floats are written with ``repr``, the shortest decimal string that parses
back to the same double, so every file round-trips exactly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .grid import Density, make_grid


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_density_csv(path, d: Density) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "density"])
        for x, p in zip(d.grid.centers, d.values):
            writer.writerow([_fmt(x), _fmt(p)])
    return path


def read_density_csv(path) -> Density:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["x", "density"]:
            raise ValueError(f"{path}: expected header x,density, got {header}")
        rows = [(float(x), float(p)) for x, p in reader]
    grid = make_grid(len(rows))
    xs = np.array([r[0] for r in rows])
    if not np.array_equal(xs, grid.centers):
        raise ValueError(f"{path}: x column does not match a uniform cell-centred grid")
    return Density(grid, np.array([r[1] for r in rows]))


def write_trajectory_csv(path, samples: Iterable[Tuple[float, Density]]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "x", "density"])
        for t, d in samples:
            for x, p in zip(d.grid.centers, d.values):
                writer.writerow([_fmt(float(t)), _fmt(x), _fmt(p)])
    return path


def _json_safe(value):
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_json(path, record: Mapping) -> Path:
    path = Path(path)
    clean = {k: _json_safe(v) for k, v in record.items()}
    path.write_text(json.dumps(clean, indent=2) + "\n")
    return path


def write_table_csv(path, rows: Sequence[Mapping], columns: List[str]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c)) for c in columns])
    return path
