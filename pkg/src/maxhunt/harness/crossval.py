"""Nested cross-validation for user-supplied datasets."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import FunctionalDataset
from .config import CVScheme, HyperGrid, Pipeline, RunOptions
from .pipeline import Params, fit_pipeline, validate_by_folds


class StratificationError(ValueError):
    pass


def stratified_folds(labels, n_folds: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Split row indices into ``n_folds`` class-stratified test folds.

    Each class is shuffled and dealt round-robin, continuing the deal where
    the previous class stopped so fold sizes differ by at most one.

    Raises
    ------
    StratificationError
        If some fold would contain no member of one of the classes.
    """
    labels = np.asarray(labels)
    n = labels.size
    if not 2 <= n_folds <= n:
        raise StratificationError(f"need 2 <= folds <= n (folds={n_folds}, n={n})")
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    pos = 0
    for label in (0, 1):
        rows = np.flatnonzero(labels == label)
        if rows.size < n_folds:
            raise StratificationError(
                f"class {label} has {rows.size} rows, fewer than the {n_folds} folds")
        for r in rng.permutation(rows):
            folds[pos % n_folds].append(int(r))
            pos += 1
    return [np.array(sorted(f), dtype=np.intp) for f in folds]


def make_folds(labels, scheme: CVScheme, rng: np.random.Generator) -> list[np.ndarray]:
    n = np.asarray(labels).size
    if scheme.scheme == "loo":
        return [np.array([i], dtype=np.intp) for i in range(n)]
    return stratified_folds(labels, scheme.folds, rng)


@dataclass(frozen=True)
class CVResult:
    accuracy: float
    predictions: np.ndarray
    fold_params: tuple[Params, ...]
    fold_n_vars: tuple[int, ...]

    @property
    def modal_params(self) -> Params:
        values = sorted(self.fold_params, key=lambda p: (p.dim or 0, p.h or 0, p.k or 0))
        return max(values, key=values.count)


def cross_validate(dataset: FunctionalDataset, pipeline: Pipeline, scheme: CVScheme,
                   grids: HyperGrid, seed: int = 0,
                   options: RunOptions = RunOptions()) -> CVResult:
    """Outer CV accuracy with hyperparameters chosen by an inner CV of the same scheme.

    Folds are stratified by class (except leave-one-out) and seeded.
    """
    root = np.random.SeedSequence(seed)
    outer_rng = np.random.default_rng(root.spawn(1)[0])
    outer = make_folds(dataset.labels, scheme, outer_rng)
    predictions = np.full(dataset.n, -1, dtype=np.int8)
    params_out, nvars_out = [], []
    all_rows = np.arange(dataset.n)
    for fold_id, test_rows in enumerate(outer):
        train = dataset.subset(np.setdiff1d(all_rows, test_rows))
        inner_rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1, fold_id)))
        inner_scheme = scheme
        if scheme.scheme == "kfold":
            inner_scheme = CVScheme("kfold", min(scheme.folds, min(train.class_counts)))
            if inner_scheme.folds < 2:
                raise StratificationError("training fold too small for inner cross-validation")
        inner = make_folds(train.labels, inner_scheme, inner_rng)
        choice = validate_by_folds(pipeline, grids, train, inner, options)
        fitted = fit_pipeline(pipeline, choice.params, train, options)
        predictions[test_rows] = fitted.predict(dataset.subset(test_rows))
        params_out.append(choice.params)
        nvars_out.append(fitted.n_vars)
    acc = float(np.mean(predictions == dataset.labels))
    return CVResult(acc, predictions, tuple(params_out), tuple(nvars_out))
