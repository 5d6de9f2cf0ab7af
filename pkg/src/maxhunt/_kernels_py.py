"""Numpy fallback for the compiled kernels in ``_kernels.pyx``.

Same signatures and return types. Used when the extension is not built, or
when ``MAXHUNT_BACKEND=python`` is set.
"""
import numpy as np


def _distances(x):
    diff = x[:, None, :] - x[None, :, :]
    if x.shape[1] == 1:
        return np.abs(diff[:, :, 0])
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def pair_distance_sums(x, labels):
    x = np.asarray(x, dtype=np.float64)
    labels = np.asarray(labels)
    if labels.shape[0] != x.shape[0]:
        raise ValueError("labels length does not match row count")
    dist = np.triu(_distances(x), k=1)
    c1 = labels == 1
    c0 = ~c1
    s00 = float(dist[np.ix_(c0, c0)].sum())
    s11 = float(dist[np.ix_(c1, c1)].sum())
    s01 = float(dist[np.ix_(c0, c1)].sum() + dist[np.ix_(c1, c0)].sum())
    return s00, s11, s01


def weighted_distance_sum(x, w):
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if w.shape[0] != x.shape[0]:
        raise ValueError("weights length does not match row count")
    return float(w @ _distances(x) @ w)


def dcov_dc(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] != x.shape[0]:
        raise ValueError("x and y must have the same number of rows")
    a = _distances(x)
    b = _distances(y)
    a = a - a.mean(axis=0)[None, :] - a.mean(axis=1)[:, None] + a.mean()
    b = b - b.mean(axis=0)[None, :] - b.mean(axis=1)[:, None] + b.mean()
    return float((a * b).mean())


def sq_euclidean(q, t):
    q = np.asarray(q, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if q.shape[1] != t.shape[1]:
        raise ValueError("dimension mismatch")
    diff = q[:, None, :] - t[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)
