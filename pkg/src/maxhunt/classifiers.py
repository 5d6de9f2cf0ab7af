"""k-nearest neighbours and Fisher's linear discriminant for binary labels."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from . import _backend

#: default ridge, as a fraction of trace(S)/c added to the pooled covariance diagonal
DEFAULT_LDA_REGULARIZATION = 1e-8


class IllConditionedError(np.linalg.LinAlgError):
    pass


def _features(x) -> np.ndarray:
    return _backend.as_matrix(x)


def _check_labels(labels, m: int) -> np.ndarray:
    y = np.asarray(labels)
    if y.shape != (m,):
        raise ValueError("labels must have one entry per feature row")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0 or 1")
    return y.astype(np.int8)


@dataclass(frozen=True, eq=False)
class KnnModel:
    features: np.ndarray
    labels: np.ndarray
    k: int


def knn_fit(features, labels, k: int) -> KnnModel:
    x = _features(features)
    y = _check_labels(labels, x.shape[0])
    if k < 1 or k % 2 == 0:
        raise ValueError(f"k must be a positive odd integer (got {k})")
    if k > x.shape[0]:
        raise ValueError(f"k={k} exceeds the number of training rows ({x.shape[0]})")
    return KnnModel(x, y, int(k))


def neighbour_order(model: KnnModel, query) -> np.ndarray:
    """Training-row indices sorted by distance to each query row.

    Equal distances keep training order, so the smaller index comes first.
    """
    q = _features(query)
    if q.shape[1] != model.features.shape[1]:
        raise ValueError(f"query has {q.shape[1]} features, model expects "
                         f"{model.features.shape[1]}")
    dist = _backend.kernels().sq_euclidean(q, model.features)
    return np.argsort(dist, axis=1, kind="stable")


def votes_to_labels(neighbour_labels: np.ndarray, k: int) -> np.ndarray:
    return (2 * neighbour_labels[:, :k].sum(axis=1) > k).astype(np.int8)


def knn_predict(model: KnnModel, query) -> np.ndarray:
    """Majority label among the k nearest training rows."""
    order = neighbour_order(model, query)
    return votes_to_labels(model.labels[order], model.k)


def knn_predict_many(model: KnnModel, query, ks) -> dict[int, np.ndarray]:
    """Predictions for several k at once, sharing one distance computation."""
    order = neighbour_order(model, query)
    nl = model.labels[order]
    out = {}
    for k in ks:
        if k < 1 or k % 2 == 0 or k > model.features.shape[0]:
            raise ValueError(f"invalid k={k} for {model.features.shape[0]} training rows")
        out[k] = votes_to_labels(nl, k)
    return out


@dataclass(frozen=True, eq=False)
class LdaModel:
    mean0: np.ndarray
    mean1: np.ndarray
    cov_factor: tuple
    log_prior_odds: float
    direction: np.ndarray

    def discriminant(self, query) -> np.ndarray:
        q = _features(query)
        if q.shape[1] != self.mean0.size:
            raise ValueError(f"query has {q.shape[1]} features, model expects {self.mean0.size}")
        mid = 0.5 * (self.mean0 + self.mean1)
        return (q - mid) @ self.direction + self.log_prior_odds


def lda_fit(features, labels, regularization: float = DEFAULT_LDA_REGULARIZATION) -> LdaModel:
    """Gaussian LDA with pooled covariance and empirical priors.

    The pooled covariance gets ``regularization * trace(S) / c`` added to its
    diagonal.
    """
    x = _features(features)
    y = _check_labels(labels, x.shape[0])
    x0, x1 = x[y == 0], x[y == 1]
    n0, n1 = len(x0), len(x1)
    if n0 < 2 or n1 < 2:
        raise ValueError("LDA needs at least two rows per class")
    c = x.shape[1]
    m0, m1 = x0.mean(axis=0), x1.mean(axis=0)
    s = ((x0 - m0).T @ (x0 - m0) + (x1 - m1).T @ (x1 - m1)) / (n0 + n1 - 2)
    s = s + regularization * np.trace(s) / c * np.eye(c)
    try:
        factor = linalg.cho_factor(s, lower=True, check_finite=True)
    except linalg.LinAlgError:
        raise IllConditionedError(
            "pooled covariance is singular; increase the LDA regularization") from None
    # squared pivots are the Schur complements; an exactly singular matrix
    # leaves a pivot of rounding size, about eps relative to the largest one
    piv = np.diag(factor[0]) ** 2
    if piv.min() <= 64 * np.finfo(np.float64).eps * max(piv.max(), 1e-300):
        raise IllConditionedError(
            "pooled covariance is numerically singular; increase the LDA regularization")
    direction = linalg.cho_solve(factor, m1 - m0)
    return LdaModel(m0, m1, factor, float(np.log(n1 / n0)), direction)


def lda_predict(model: LdaModel, query) -> np.ndarray:
    """Label 1 iff the discriminant is strictly positive."""
    return (model.discriminant(query) > 0).astype(np.int8)


def accuracy(predicted, truth) -> float:
    p = np.asarray(predicted)
    t = np.asarray(truth)
    if p.shape != t.shape:
        raise ValueError("predicted and true labels differ in length")
    if p.size == 0:
        raise ValueError("cannot score an empty prediction")
    return float(np.mean(p == t))
