"""Selector + classifier pipelines and their hyperparameter search.

A *candidate* is one point of the hyperparameter grid: ``dim`` (variables or
PLS components), ``h`` (maxima-hunting window) and ``k`` (k-NN). The
expensive part of each selector (the dependence curve, the mRMR path, the t
scores) is computed once per training set and shared by every candidate.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..classifiers import (IllConditionedError, knn_fit, knn_predict, knn_predict_many,
                           lda_fit, lda_predict)
from ..core import FunctionalDataset
from ..dcov import Measure, dependence_curve
from ..maxima import local_maxima
from ..selectors import Method, Projection, index_projection, mrmr_path, pls_fit, project, t_scores
from .config import Classifier, HyperGrid, Pipeline, RunOptions


@dataclass(frozen=True)
class Params:
    """Hyperparameters of one candidate; unused entries are ``None``."""

    dim: int | None = None
    h: int | None = None
    k: int | None = None

    def as_dict(self) -> dict:
        return {"dim": self.dim, "h": self.h, "k": self.k}


@dataclass(frozen=True)
class Choice:
    params: Params
    accuracy: float
    n_vars: float


def _sort_key(params: Params, accuracy: float, n_vars: float):
    # accuracy first, then parsimony, then the smaller dim / k / h
    return (-accuracy, n_vars, params.dim or 0, params.k or 0, params.h or 0)


def feature_candidates(method: Method, grids: HyperGrid, train: FunctionalDataset,
                       options: RunOptions) -> Iterator[tuple[int | None, int | None, Projection]]:
    """Yield ``(dim, h, projection)`` for every selector setting in the grids."""
    grid = train.grid
    n_points = train.n_points
    if method is Method.BASE:
        yield None, None, index_projection(grid, range(n_points))
    elif method.is_maxima_hunting:
        measure = Measure.V2 if method is Method.MHV else Measure.R2
        curve = dependence_curve(train, measure, options.estimator_for(measure))
        for h in grids.h:
            if h >= n_points:
                continue
            maxima = local_maxima(curve, h)
            for dim in grids.dims:
                idx = maxima[:dim]
                if idx:
                    yield dim, h, index_projection(grid, idx)
    elif method is Method.T:
        scores = t_scores(train).values
        order = sorted(range(n_points), key=lambda i: (-scores[i], i))
        for dim in grids.dims:
            if dim <= n_points:
                yield dim, None, index_projection(grid, order[:dim])
    elif method.is_mrmr:
        dims = [d for d in grids.dims if d <= n_points]
        if dims:
            path, _ = mrmr_path(train, max(dims), method, options.mi_width)
            for dim in dims:
                yield dim, None, index_projection(grid, path[:dim])
    elif method is Method.PLS:
        limit = min(train.n - 1, n_points)
        for c in grids.pls_components:
            if c <= limit:
                proj = pls_fit(train, c)
                if proj.info["n_components"] == c:
                    yield c, None, proj
    else:  # pragma: no cover
        raise ValueError(f"unsupported method {method}")


def _n_vars(proj: Projection) -> int:
    return proj.n_features


def candidate_correct_counts(pipeline: Pipeline, grids: HyperGrid, train: FunctionalDataset,
                             held_out: FunctionalDataset, options: RunOptions):
    """Number of correctly classified held-out rows for every candidate.

    Returns ``{Params: (correct, n_vars)}``. Candidates whose classifier
    cannot be fit (e.g. a singular LDA covariance) are left out.
    """
    out = {}
    for dim, h, proj in feature_candidates(pipeline.method, grids, train, options):
        xtr = project(proj, train)
        xte = project(proj, held_out)
        if pipeline.classifier is Classifier.KNN:
            ks = [k for k in grids.k if k <= train.n]
            if not ks:
                continue
            preds = knn_predict_many(knn_fit(xtr, train.labels, ks[0]), xte, ks)
            for k, pred in preds.items():
                out[Params(dim, h, k)] = (int((pred == held_out.labels).sum()), _n_vars(proj))
        else:
            try:
                model = lda_fit(xtr, train.labels, options.lda_regularization)
            except (IllConditionedError, ValueError):
                continue
            pred = lda_predict(model, xte)
            out[Params(dim, h, None)] = (int((pred == held_out.labels).sum()), _n_vars(proj))
    return out


def choose(totals: dict, denominators: dict | int) -> Choice:
    """Best candidate from ``{Params: (correct, n_vars_sum, count)}``."""
    best = None
    for params, (correct, nv_sum, count) in totals.items():
        denom = denominators if isinstance(denominators, int) else denominators[params]
        acc = correct / denom
        nv = nv_sum / count
        key = _sort_key(params, acc, nv)
        if best is None or key < best[0]:
            best = (key, Choice(params, acc, nv))
    if best is None:
        raise RuntimeError("no hyperparameter candidate could be evaluated")
    return best[1]


def validate_hyperparams(pipeline: Pipeline, grids: HyperGrid, train: FunctionalDataset,
                         validation: FunctionalDataset,
                         options: RunOptions = RunOptions()) -> Choice:
    """Exhaustive grid search maximizing accuracy on ``validation``.

    Ties prefer fewer variables, then smaller dim, k and h.
    """
    counts = candidate_correct_counts(pipeline, grids, train, validation, options)
    totals = {p: (c, nv, 1) for p, (c, nv) in counts.items()}
    return choose(totals, validation.n)


def validate_by_folds(pipeline: Pipeline, grids: HyperGrid, dataset: FunctionalDataset,
                      folds: Sequence[np.ndarray], options: RunOptions = RunOptions()) -> Choice:
    """Grid search scored by pooled accuracy over the given held-out folds.

    A candidate that could not be evaluated on some fold counts as wrong on
    that fold's rows.
    """
    totals: dict = defaultdict(lambda: [0, 0.0, 0])
    all_rows = np.arange(dataset.n)
    for test_rows in folds:
        train_rows = np.setdiff1d(all_rows, test_rows)
        counts = candidate_correct_counts(pipeline, grids, dataset.subset(train_rows),
                                          dataset.subset(test_rows), options)
        for params, (correct, nv) in counts.items():
            acc = totals[params]
            acc[0] += correct
            acc[1] += nv
            acc[2] += 1
    total_rows = int(sum(len(f) for f in folds))
    return choose({p: tuple(v) for p, v in totals.items()}, total_rows)


@dataclass(frozen=True)
class FittedPipeline:
    pipeline: Pipeline
    params: Params
    projection: Projection
    model: object

    @property
    def n_vars(self) -> int:
        return self.projection.n_features

    def predict(self, dataset: FunctionalDataset) -> np.ndarray:
        x = project(self.projection, dataset)
        if self.pipeline.classifier is Classifier.KNN:
            return knn_predict(self.model, x)
        return lda_predict(self.model, x)


def fit_pipeline(pipeline: Pipeline, params: Params, train: FunctionalDataset,
                 options: RunOptions = RunOptions()) -> FittedPipeline:
    """Fit the selector and classifier on ``train`` with fixed hyperparameters."""
    single = HyperGrid(k=(params.k or 1,), dims=(params.dim or 1,), h=(params.h or 1,),
                       pls_components=(params.dim or 1,))
    found = list(feature_candidates(pipeline.method, single, train, options))
    if not found:
        raise RuntimeError(f"{pipeline.method.value} produced no features with {params}")
    _, _, proj = found[0]
    xtr = project(proj, train)
    if pipeline.classifier is Classifier.KNN:
        model = knn_fit(xtr, train.labels, params.k)
    else:
        model = lda_fit(xtr, train.labels, options.lda_regularization)
    return FittedPipeline(pipeline, params, proj, model)
