"""Scoring methods across experiments: relative, positional and F1 rankings.

Each experiment (a row of accuracies, one per method) awards points to the
methods; a method's final score is its mean over experiments.

* relative: ``10 (u - w) / (W - w)`` with ``W``/``w`` the row's best/worst
  accuracy (all methods get 10 when ``W == w``);
* positional: 10 to the best, 9 to the second, and so on;
* F1: 25, 18, 15, 10, 8, 6, 4 to the first seven, 0 afterwards.

Tied methods share the mean of the positional or F1 points they span.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

F1_POINTS = (25.0, 18.0, 15.0, 10.0, 8.0, 6.0, 4.0)


class Criterion(str, Enum):
    RELATIVE = "relative"
    POSITIONAL = "positional"
    F1 = "F1"


@dataclass(frozen=True)
class RankingTable:
    criterion: Criterion
    methods: tuple[str, ...]
    scores: np.ndarray
    row_points: np.ndarray

    def as_dict(self) -> dict[str, float]:
        return {m: float(s) for m, s in zip(self.methods, self.scores)}


def _rank_points(row: np.ndarray, table: Sequence[float]) -> np.ndarray:
    m = row.size
    pts = np.zeros(m)
    pts[: min(m, len(table))] = table[:m]
    # positions 0..m-1 by descending accuracy; ties share the mean of their span
    lo = rankdata(-row, method="min").astype(int) - 1
    hi = rankdata(-row, method="max").astype(int)
    return np.array([pts[a:b].mean() for a, b in zip(lo, hi)])


def row_points(row, criterion) -> np.ndarray:
    """Points awarded within a single experiment."""
    row = np.asarray(row, dtype=np.float64)
    criterion = Criterion(criterion)
    if row.ndim != 1 or row.size < 2:
        raise ValueError("a ranking row needs at least two methods")
    if not np.all(np.isfinite(row)):
        raise ValueError("ranking rows must be finite")
    if criterion is Criterion.RELATIVE:
        best, worst = row.max(), row.min()
        if best == worst:
            return np.full(row.size, 10.0)
        return 10.0 * (row - worst) / (best - worst)
    if criterion is Criterion.POSITIONAL:
        return _rank_points(row, [10.0 - i for i in range(row.size)])
    return _rank_points(row, F1_POINTS)


def rank_methods(table, criterion, methods: Sequence[str] | None = None) -> RankingTable:
    """Rank methods from an ``experiments x methods`` accuracy table."""
    arr = np.atleast_2d(np.asarray(table, dtype=np.float64))
    if arr.shape[0] == 0:
        raise ValueError("ranking needs at least one experiment")
    if methods is None:
        methods = [f"method{j}" for j in range(arr.shape[1])]
    if len(methods) != arr.shape[1]:
        raise ValueError("one method name per column is required")
    criterion = Criterion(criterion)
    pts = np.vstack([row_points(r, criterion) for r in arr])
    return RankingTable(criterion, tuple(methods), pts.mean(axis=0), pts)


def table_from_aggregates(aggregates) -> tuple[list[tuple[str, int]], list[str], np.ndarray]:
    """Pivot aggregate rows to ``(experiments, pipelines, accuracy matrix)``.

    Experiments are (model, n) pairs. Experiments lacking a finite accuracy
    for some pipeline are left out, since they cannot be ranked.
    """
    experiments: list[tuple[str, int]] = []
    pipelines: list[str] = []
    cells = {}
    for a in aggregates:
        key = (a.model, int(a.n))
        if key not in experiments:
            experiments.append(key)
        if a.pipeline not in pipelines:
            pipelines.append(a.pipeline)
        cells[key, a.pipeline] = a.mean_accuracy
    matrix = np.array([[cells.get((e, p), np.nan) for p in pipelines] for e in experiments],
                      dtype=np.float64).reshape(len(experiments), len(pipelines))
    keep = np.all(np.isfinite(matrix), axis=1)
    return [e for e, k in zip(experiments, keep) if k], pipelines, matrix[keep]
