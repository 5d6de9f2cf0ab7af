"""Distance covariance and correlation between process marginals and a binary label.

Three estimators of the squared distance covariance V^2(X_t, Y) are provided:

``U``
    the class-conditional form ``4 p^2 (1-p)^2 [I01 - (I00 + I11)/2]`` with
    each ``I`` replaced by a U-statistic over within/between-class pairs;
``V``
    the plug-in pair form ``-(2/n^2) sum_ij (Y_i - p)(Y_j - p) |x_i - x_j|``;
``DC``
    the double-centered distance-matrix statistic, valid for any response.

For a binary response ``DC`` and ``V`` coincide exactly (up to rounding); ``U``
differs from them by O(1/min(n0, n1)). Negative ``U`` values are returned as
they are.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from . import _backend
from .core import DatasetError, FunctionalDataset, Grid, format_float

#: denominators of R^2 below this are treated as zero (R^2 := 0)
DCOR_DENOMINATOR_FLOOR = 1e-14


class Measure(str, Enum):
    V2 = "V2"
    R2 = "R2"
    T = "T"


class Estimator(str, Enum):
    U = "U"
    V = "V"
    DC = "DC"


class DegenerateClassError(DatasetError):
    """A class has too few samples for the requested estimator."""


@dataclass(frozen=True)
class MarginalSample:
    """Process values at d chosen grid points, with binary labels."""

    values: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        x = _backend.as_matrix(self.values)
        y = np.asarray(self.labels)
        if x.shape[1] < 1:
            raise ValueError("need at least one coordinate (d >= 1)")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise ValueError("row count must match label count")
        if not np.all((y == 0) | (y == 1)):
            raise ValueError("labels must be 0 or 1")
        object.__setattr__(self, "values", x)
        object.__setattr__(self, "labels", _backend.as_labels(y))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @classmethod
    def at(cls, dataset: FunctionalDataset, indices) -> "MarginalSample":
        """Marginal of ``dataset`` at the given grid indices."""
        idx = np.atleast_1d(np.asarray(indices, dtype=np.intp))
        return cls(dataset.trajectories[:, idx], dataset.labels)


@dataclass(frozen=True, eq=False)
class DependenceCurve:
    """Per-grid-point dependence values."""

    grid: Grid
    values: np.ndarray
    measure: Measure
    estimator: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.shape != (len(self.grid),):
            raise ValueError("curve length must equal grid length")
        measure = Measure(self.measure)
        if measure is Measure.R2 and np.any(np.abs(vals) > 1.0 + 1e-12):
            raise ValueError("R2 values must lie in [-1, 1]")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "measure", measure)

    def __len__(self) -> int:
        return self.values.size

    @property
    def label(self) -> str:
        return f"{self.measure.value}:{self.estimator}" if self.estimator else self.measure.value


def _class_counts(labels: np.ndarray) -> tuple[int, int]:
    n1 = int(labels.sum())
    return labels.shape[0] - n1, n1


def dcov_sq_u(sample: MarginalSample) -> float:
    """U-statistic estimate of V^2(X_t, Y) from the class-conditional form.

    Raises
    ------
    DegenerateClassError
        If either class has fewer than two samples.
    """
    n0, n1 = _class_counts(sample.labels)
    if n0 < 2 or n1 < 2:
        raise DegenerateClassError(
            f"U estimator needs >= 2 samples per class (got n0={n0}, n1={n1})")
    s00, s11, s01 = _backend.kernels().pair_distance_sums(sample.values, sample.labels)
    i00 = 2.0 * s00 / (n0 * (n0 - 1))
    i11 = 2.0 * s11 / (n1 * (n1 - 1))
    i01 = s01 / (n0 * n1)
    p = n1 / sample.n
    return 4.0 * p * p * (1.0 - p) ** 2 * (i01 - 0.5 * (i00 + i11))


def dcov_sq_v(sample: MarginalSample) -> float:
    """Plug-in V-statistic ``-(2/n^2) sum_ij (Y_i - p)(Y_j - p) |x_i - x_j|``."""
    n = sample.n
    if n < 2:
        raise DegenerateClassError("V estimator needs n >= 2")
    w = sample.labels.astype(np.float64) - sample.labels.sum() / n
    total = _backend.kernels().weighted_distance_sum(sample.values, w)
    return -2.0 * total / (n * n)


def dcov_sq_dc(x, y) -> float:
    """Double-centered sample distance covariance of the rows of ``x`` and ``y``."""
    x = _backend.as_matrix(x)
    y = _backend.as_matrix(y)
    if x.shape[0] != y.shape[0]:
        raise ValueError("x and y must have the same number of rows")
    if x.shape[0] < 2:
        raise ValueError("need n >= 2")
    return _backend.kernels().dcov_dc(x, y)


def dvar_sq(x) -> float:
    """Sample distance variance; never negative."""
    x = _backend.as_matrix(x)
    return dcov_sq_dc(x, x)


def dcor_sq(sample: MarginalSample) -> float:
    """Squared distance correlation between the marginal and the 0/1 label.

    Zero when the denominator ``sqrt(dvar(x) dvar(y))`` is below
    ``DCOR_DENOMINATOR_FLOOR``.
    """
    y = sample.labels.astype(np.float64)
    num = dcov_sq_dc(sample.values, y)
    den = math.sqrt(max(dvar_sq(sample.values), 0.0) * max(dvar_sq(y), 0.0))
    if den < DCOR_DENOMINATOR_FLOOR:
        return 0.0
    return num / den


_V2_ESTIMATORS = {
    Estimator.U: dcov_sq_u,
    Estimator.V: dcov_sq_v,
    Estimator.DC: lambda s: dcov_sq_dc(s.values, s.labels.astype(np.float64)),
}

DEFAULT_ESTIMATOR = {Measure.V2: Estimator.U, Measure.R2: Estimator.DC}


def dependence_curve(dataset: FunctionalDataset, measure="V2", estimator=None) -> DependenceCurve:
    """Evaluate V^2 or R^2 between each grid marginal and the label.

    ``estimator`` defaults to ``U`` for V2 and ``DC`` for R2. R2 always uses
    the double-centered numerator so it matches its denominator, whatever
    ``estimator`` says. Each point is a call of the scalar estimator on the
    one-column marginal, so curve values equal pointwise calls exactly.
    """
    measure = Measure(measure)
    if measure is Measure.T:
        raise ValueError("use selectors.t_scores for the T measure")
    estimator = Estimator(estimator) if estimator is not None else DEFAULT_ESTIMATOR[measure]
    if measure is Measure.R2:
        func, estimator = dcor_sq, Estimator.DC
    else:
        func = _V2_ESTIMATORS[estimator]
    if estimator is Estimator.U:
        n0, n1 = dataset.class_counts
        if n0 < 2 or n1 < 2:
            raise DegenerateClassError(
                f"U estimator needs >= 2 samples per class (got n0={n0}, n1={n1})")
    labels = _backend.as_labels(dataset.labels)
    values = np.empty(dataset.n_points)
    for j in range(dataset.n_points):
        values[j] = func(MarginalSample(dataset.trajectories[:, j:j + 1], labels))
    return DependenceCurve(dataset.grid, values, measure, estimator.value)


def save_curve(curve: DependenceCurve, path: str | Path) -> None:
    """Write a two-column ``t,<measure>:<estimator>`` CSV."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", curve.label])
        for t, v in zip(curve.grid.points, curve.values):
            writer.writerow([format_float(t), format_float(v)])


def load_curve(path: str | Path) -> DependenceCurve:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows or len(rows[0]) != 2 or rows[0][0] != "t":
        raise ValueError("curve CSV header must be 't,<measure>[:<estimator>]'")
    measure, _, estimator = rows[0][1].partition(":")
    t = [float(r[0]) for r in rows[1:]]
    v = [float(r[1]) for r in rows[1:]]
    return DependenceCurve(Grid(t), np.array(v), Measure(measure), estimator)
