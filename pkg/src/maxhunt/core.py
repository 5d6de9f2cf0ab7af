"""Domain types shared by every module, plus dataset-CSV ingestion.

A dataset-CSV file is self-describing: the header row is ``t``, then the N
grid values, then ``label``; each data row holds N trajectory values and a 0/1
label. Floats are written in shortest round-trip form so ``save_dataset``
followed by ``load_dataset`` is lossless.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np


class DatasetError(ValueError):
    """A dataset violates one of the FunctionalDataset invariants."""


class DatasetFormatError(DatasetError):
    """A dataset-CSV file is malformed.

    ``row`` counts data rows from 1 (the header is row 0); ``column`` counts
    cells from 1. Either may be ``None`` when the problem is file-wide.
    """

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.row = row
        self.column = column


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


def format_float(value: float) -> str:
    """Shortest decimal string that parses back to the same double."""
    return repr(float(value))


@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing evaluation points in [0, 1]."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 1 or pts.size < 2:
            raise DatasetError("grid needs at least 2 points")
        if not np.all(np.isfinite(pts)):
            raise DatasetError("grid points must be finite")
        if np.any(np.diff(pts) <= 0):
            raise DatasetError("grid must be strictly increasing")
        if pts[0] < 0.0 or pts[-1] > 1.0:
            raise DatasetError("grid points must lie in [0, 1]")
        object.__setattr__(self, "points", _frozen(pts))

    def __len__(self) -> int:
        return self.points.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.array_equal(self.points, other.points))

    def __hash__(self) -> int:
        return hash(self.points.tobytes())

    def index_of(self, t: float) -> int:
        """Index of the grid point nearest to ``t``."""
        return int(np.argmin(np.abs(self.points - t)))


@dataclass(frozen=True, eq=False)
class FunctionalDataset:
    """n discretized trajectories on a shared grid with binary labels."""

    grid: Grid
    trajectories: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if not isinstance(self.grid, Grid):
            object.__setattr__(self, "grid", Grid(self.grid))
        x = np.asarray(self.trajectories, dtype=np.float64)
        y = np.asarray(self.labels)
        if x.ndim != 2:
            raise DatasetError("trajectories must be an n x N matrix")
        if x.shape[0] < 1:
            raise DatasetError("dataset needs at least one trajectory (n >= 1)")
        if x.shape[1] != len(self.grid):
            raise DatasetError(
                f"trajectory length {x.shape[1]} does not match grid length {len(self.grid)}")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise DatasetError("labels must be a length-n sequence")
        if not np.all((y == 0) | (y == 1)):
            raise DatasetError("labels must be 0 or 1")
        if not np.all(np.isfinite(x)):
            raise DatasetError("trajectory values must be finite")
        object.__setattr__(self, "trajectories", _frozen(x))
        object.__setattr__(self, "labels", _frozen(y.astype(np.int8)))

    @property
    def n(self) -> int:
        return self.trajectories.shape[0]

    @property
    def n_points(self) -> int:
        return self.trajectories.shape[1]

    @property
    def class_counts(self) -> tuple[int, int]:
        n1 = int(self.labels.sum())
        return self.n - n1, n1

    def subset(self, rows) -> "FunctionalDataset":
        rows = np.asarray(rows)
        return FunctionalDataset(self.grid, self.trajectories[rows], self.labels[rows])

    def equals(self, other: "FunctionalDataset") -> bool:
        """Exact element-wise equality of grid, trajectories and labels."""
        return (self.grid == other.grid
                and np.array_equal(self.trajectories, other.trajectories)
                and np.array_equal(self.labels, other.labels))


@dataclass(frozen=True)
class ClassSplit:
    class0: np.ndarray
    class1: np.ndarray
    p_hat: float


@dataclass(frozen=True)
class SelectionResult:
    """Selected grid indices (in selection order) with their scores."""

    indices: tuple[int, ...]
    scores: tuple[float, ...]
    method_id: str
    hyperparams: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise ValueError("selected indices must be distinct")
        if any(i < 0 for i in idx):
            raise ValueError("selected indices must be non-negative")
        if len(self.scores) != len(idx):
            raise ValueError("indices and scores must have equal length")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "scores", tuple(float(s) for s in self.scores))
        object.__setattr__(self, "hyperparams", dict(self.hyperparams))

    def __len__(self) -> int:
        return len(self.indices)

    def to_json(self, grid: Grid | None = None) -> str:
        record = {
            "method": self.method_id,
            "hyperparams": self.hyperparams,
            "indices": list(self.indices),
            "scores": list(self.scores),
        }
        if grid is not None:
            record["t"] = [float(grid.points[i]) for i in self.indices]
        return json.dumps(record, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SelectionResult":
        record = json.loads(text)
        return cls(record["indices"], record["scores"], record["method"],
                   record.get("hyperparams", {}))


def split_by_class(dataset: FunctionalDataset) -> ClassSplit:
    """Partition rows by label; ``p_hat = n1 / n``."""
    mask = dataset.labels == 1
    n1 = int(mask.sum())
    return ClassSplit(dataset.trajectories[~mask], dataset.trajectories[mask],
                      n1 / dataset.n)


def _parse_float(cell: str, row: int, column: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise DatasetFormatError(f"non-numeric cell {cell!r}", row, column) from None
    if not math.isfinite(value):
        raise DatasetFormatError(f"non-finite value {cell!r}", row, column)
    return value


def load_dataset(path: str | Path) -> FunctionalDataset:
    """Read a dataset-CSV file."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DatasetFormatError("empty file", 0)
    header = [c.strip() for c in rows[0]]
    if len(header) < 4 or header[0] != "t" or header[-1] != "label":
        raise DatasetFormatError(
            "header must be 't', the grid values, then 'label'", 0)
    grid_vals = [_parse_float(c, 0, j + 2) for j, c in enumerate(header[1:-1])]
    for j in range(1, len(grid_vals)):
        if grid_vals[j] <= grid_vals[j - 1]:
            raise DatasetFormatError("grid values must be strictly increasing", 0, j + 2)
    try:
        grid = Grid(grid_vals)
    except DatasetError as exc:
        raise DatasetFormatError(str(exc), 0) from None

    n_points = len(grid_vals)
    values, labels = [], []
    for r, raw in enumerate(rows[1:], start=1):
        if not raw or (len(raw) == 1 and not raw[0].strip()):
            continue
        cells = [c.strip() for c in raw]
        if len(cells) != n_points + 1:
            raise DatasetFormatError(
                f"expected {n_points} values and a label, found {len(cells)} cells", r)
        if any(c == "" for c in cells):
            raise DatasetFormatError("missing cell", r, cells.index("") + 1)
        values.append([_parse_float(c, r, j + 1) for j, c in enumerate(cells[:-1])])
        label = cells[-1]
        if label not in ("0", "1"):
            raise DatasetFormatError(f"label must be 0 or 1, got {label!r}", r, n_points + 1)
        labels.append(int(label))
    if not values:
        raise DatasetFormatError("no data rows", None)
    return FunctionalDataset(grid, np.array(values), np.array(labels))


def save_dataset(dataset: FunctionalDataset, path: str | Path) -> None:
    """Write ``dataset`` as dataset-CSV (lossless)."""
    if not isinstance(dataset, FunctionalDataset):
        raise TypeError("expected a FunctionalDataset")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", *map(format_float, dataset.grid.points), "label"])
        for row, label in zip(dataset.trajectories, dataset.labels):
            writer.writerow([*map(format_float, row), int(label)])


def as_dataset(x: Sequence[Sequence[float]], labels: Sequence[int],
               grid: Grid | Sequence[float] | None = None) -> FunctionalDataset:
    """Convenience constructor; an equispaced grid on (0, 1] is used if none given."""
    x = np.asarray(x, dtype=np.float64)
    if grid is None:
        grid = Grid(np.arange(1, x.shape[1] + 1) / x.shape[1])
    elif not isinstance(grid, Grid):
        grid = Grid(grid)
    return FunctionalDataset(grid, x, np.asarray(labels))
