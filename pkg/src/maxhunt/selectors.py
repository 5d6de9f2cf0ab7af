"""Competing dimension-reduction methods behind one interface.

``T``      top-d univariate two-sample t scores (no redundancy control)
``FCD``    mRMR, F-statistic relevance minus mean |correlation| redundancy
``FCQ``    the same as a quotient
``MID``    mRMR on 3-level discretized mutual information, difference
``MIQ``    the same as a quotient
``PLS``    PLS1 components (a projection, not a selection)
``BASE``   the whole curve
``MHV``/``MHR`` are dispatched to :mod:`maxhunt.maxima`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping

import numpy as np

from .core import FunctionalDataset, Grid, SelectionResult
from .dcov import DependenceCurve, Measure

#: floor applied to mean redundancy in the quotient variants
QUOTIENT_FLOOR = 1e-12
#: used as the t score where the standard error vanishes but the means differ
T_SCORE_SENTINEL = np.finfo(np.float64).max


class Method(str, Enum):
    MHV = "MHV"
    MHR = "MHR"
    T = "T"
    FCD = "FCD"
    FCQ = "FCQ"
    MID = "MID"
    MIQ = "MIQ"
    PLS = "PLS"
    BASE = "BASE"

    @property
    def is_mrmr(self) -> bool:
        return self in (Method.FCD, Method.FCQ, Method.MID, Method.MIQ)

    @property
    def is_maxima_hunting(self) -> bool:
        return self in (Method.MHV, Method.MHR)


@dataclass(frozen=True)
class SelectorSpec:
    method: Method
    target_dim: int = 1
    method_params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if int(self.target_dim) < 1:
            raise ValueError("target_dim must be >= 1")
        if self.method is Method.BASE and self.method_params:
            raise ValueError("BASE takes no parameters")
        object.__setattr__(self, "method_params", dict(self.method_params))

    def to_dict(self) -> dict:
        return {"method": self.method.value, "target_dim": int(self.target_dim),
                "method_params": dict(self.method_params)}

    @classmethod
    def from_dict(cls, record: Mapping[str, Any]) -> "SelectorSpec":
        return cls(record["method"], record.get("target_dim", 1),
                   record.get("method_params", {}))


class ProjectionKind(str, Enum):
    INDEX = "index-subset"
    LINEAR = "linear-map"


@dataclass(frozen=True, eq=False)
class Projection:
    """Fitted map from a dataset on ``grid`` to a feature matrix.

    For ``INDEX`` projections ``indices`` are gathered; for ``LINEAR`` ones the
    data are centered with ``means`` and multiplied by ``weights`` (N x c).
    """

    kind: ProjectionKind
    grid: Grid
    indices: tuple[int, ...] = ()
    weights: np.ndarray | None = None
    means: np.ndarray | None = None
    info: Mapping[str, Any] = field(default_factory=dict)

    @property
    def n_features(self) -> int:
        if self.kind is ProjectionKind.INDEX:
            return len(self.indices)
        return self.weights.shape[1]


class GridMismatchError(ValueError):
    pass


def project(projection: Projection, dataset: FunctionalDataset) -> np.ndarray:
    """Apply a fitted projection, returning an ``n x c`` feature matrix."""
    if dataset.grid != projection.grid:
        raise GridMismatchError("dataset grid differs from the grid the projection was fit on")
    x = dataset.trajectories
    if projection.kind is ProjectionKind.INDEX:
        return np.ascontiguousarray(x[:, list(projection.indices)])
    return (x - projection.means) @ projection.weights


def index_projection(grid: Grid, indices, **info) -> Projection:
    return Projection(ProjectionKind.INDEX, grid, tuple(int(i) for i in indices), info=info)


def _class_moments(dataset: FunctionalDataset):
    y = dataset.labels
    x0 = dataset.trajectories[y == 0]
    x1 = dataset.trajectories[y == 1]
    if len(x0) < 2 or len(x1) < 2:
        raise ValueError("each class needs at least two samples")
    return x0, x1


def t_scores(dataset: FunctionalDataset) -> DependenceCurve:
    """Welch-type two-sample statistic ``|m1 - m0| / sqrt(s1^2/n1 + s0^2/n0)`` per point."""
    x0, x1 = _class_moments(dataset)
    num = np.abs(x1.mean(axis=0) - x0.mean(axis=0))
    se = np.sqrt(x1.var(axis=0, ddof=1) / len(x1) + x0.var(axis=0, ddof=1) / len(x0))
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = num / se
    zero_se = se == 0
    scores[zero_se] = np.where(num[zero_se] == 0, 0.0, T_SCORE_SENTINEL)
    return DependenceCurve(dataset.grid, scores, Measure.T, "T")


def _top_k(values: np.ndarray, k: int) -> list[int]:
    order = sorted(range(values.size), key=lambda i: (-values[i], i))
    return order[:k]


def t_select(dataset: FunctionalDataset, d: int) -> SelectionResult:
    if not 1 <= d <= dataset.n_points:
        raise ValueError(f"d must be in [1, N] (d={d}, N={dataset.n_points})")
    scores = t_scores(dataset).values
    idx = _top_k(scores, d)
    return SelectionResult(idx, scores[idx], "T", {"d": d})


# -- mRMR -------------------------------------------------------------------

def f_statistic(dataset: FunctionalDataset) -> np.ndarray:
    """Two-class one-way ANOVA F statistic per grid point."""
    x0, x1 = _class_moments(dataset)
    x = dataset.trajectories
    grand = x.mean(axis=0)
    between = len(x0) * (x0.mean(axis=0) - grand) ** 2 + len(x1) * (x1.mean(axis=0) - grand) ** 2
    within = ((x0 - x0.mean(axis=0)) ** 2).sum(axis=0) + ((x1 - x1.mean(axis=0)) ** 2).sum(axis=0)
    within /= x.shape[0] - 2
    with np.errstate(divide="ignore", invalid="ignore"):
        f = between / within
    f[within == 0] = np.where(between[within == 0] == 0, 0.0, T_SCORE_SENTINEL)
    return f


def abs_correlation(x: np.ndarray, j: int) -> np.ndarray:
    """|Pearson correlation| of every column of ``x`` with column ``j``; 0 for constant columns."""
    xc = x - x.mean(axis=0)
    norms = np.sqrt((xc ** 2).sum(axis=0))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (xc.T @ xc[:, j]) / (norms * norms[j])
    r[~np.isfinite(r)] = 0.0
    return np.minimum(np.abs(r), 1.0)


def discretize3(x: np.ndarray, width: float = 1.0) -> np.ndarray:
    """Per-column levels 0/1/2 split at ``mean -/+ width * std``."""
    x = np.asarray(x, dtype=np.float64)
    mu = x.mean(axis=0)
    sd = x.std(axis=0)
    levels = np.ones(x.shape, dtype=np.int8)
    levels[x < mu - width * sd] = 0
    levels[x > mu + width * sd] = 2
    return levels


def mutual_information(a: np.ndarray, b: np.ndarray) -> float:
    """Plug-in mutual information (nats) of two small-alphabet integer sequences."""
    a = np.asarray(a, dtype=np.intp)
    b = np.asarray(b, dtype=np.intp)
    table = np.zeros((a.max() + 1, b.max() + 1))
    np.add.at(table, (a, b), 1.0)
    pxy = table / a.size
    px = pxy.sum(axis=1, keepdims=True)
    py = pxy.sum(axis=0, keepdims=True)
    nz = pxy > 0
    return float((pxy[nz] * np.log(pxy[nz] / (px @ py)[nz])).sum())


def _mi_columns(levels: np.ndarray, target: np.ndarray) -> np.ndarray:
    return np.array([mutual_information(levels[:, j], target) for j in range(levels.shape[1])])


def mrmr_path(dataset: FunctionalDataset, d: int, variant, mi_width: float = 1.0):
    """Greedy mRMR ordering of the first ``d`` variables.

    Returns ``(indices, criterion values at each pick)``. Ties go to the
    smaller index. Prefixes of a longer path equal shorter paths, so the
    harness computes one path per training set.
    """
    variant = Method(variant)
    if not variant.is_mrmr:
        raise ValueError(f"{variant.value} is not an mRMR variant")
    n_points = dataset.n_points
    if not 1 <= d <= n_points:
        raise ValueError(f"d must be in [1, N] (d={d}, N={n_points})")
    quotient = variant in (Method.FCQ, Method.MIQ)
    if variant in (Method.FCD, Method.FCQ):
        _class_moments(dataset)
        relevance = f_statistic(dataset)
        x = dataset.trajectories

        def redundancy_with(j):
            return abs_correlation(x, j)
    else:
        _class_moments(dataset)
        levels = discretize3(dataset.trajectories, mi_width)
        relevance = _mi_columns(levels, dataset.labels)

        def redundancy_with(j):
            return _mi_columns(levels, levels[:, j])

    selected = [int(_top_k(relevance, 1)[0])]
    scores = [float(relevance[selected[0]])]
    red_sum = np.zeros(n_points)
    available = np.ones(n_points, dtype=bool)
    available[selected[0]] = False
    while len(selected) < d:
        red_sum += redundancy_with(selected[-1])
        mean_red = red_sum / len(selected)
        if quotient:
            crit = relevance / np.maximum(mean_red, QUOTIENT_FLOOR)
        else:
            crit = relevance - mean_red
        crit = np.where(available, crit, -np.inf)
        j = int(np.argmax(crit))  # first occurrence = smaller index on ties
        selected.append(j)
        scores.append(float(crit[j]))
        available[j] = False
    return selected, scores


def mrmr_select(dataset: FunctionalDataset, d: int, variant="FCQ",
                mi_width: float = 1.0) -> SelectionResult:
    idx, scores = mrmr_path(dataset, d, variant, mi_width)
    return SelectionResult(idx, scores, Method(variant).value, {"d": d})


# -- PLS --------------------------------------------------------------------

#: tolerance on |cos| between training score columns
PLS_ORTHOGONALITY_TOL = 1e-8


def pls_fit(dataset: FunctionalDataset, c: int) -> Projection:
    """PLS1 with 0/1 response, by iterative deflation.

    The stored weights are the rotation ``W (P^T W)^{-1}``, so projecting the
    (centered) training data reproduces the deflation scores. If a residual
    weight vector vanishes, fitting stops early; ``info['n_components']``
    reports how many components were obtained.
    """
    n, n_points = dataset.trajectories.shape
    if c < 1:
        raise ValueError("number of PLS components must be >= 1")
    if c > min(n - 1, n_points):
        raise ValueError(f"c must be <= min(n - 1, N) = {min(n - 1, n_points)}")
    n0, n1 = dataset.class_counts
    if n0 == 0 or n1 == 0:
        raise ValueError("both classes must be present")
    means = dataset.trajectories.mean(axis=0)
    x = dataset.trajectories - means
    y = dataset.labels.astype(np.float64)
    y = y - y.mean()
    scale = np.abs(x).max() or 1.0
    w_cols, p_cols, t_cols = [], [], []
    for _ in range(c):
        w = x.T @ y
        norm = np.linalg.norm(w)
        if norm <= 1e-12 * scale * np.sqrt(n):
            break
        w = w / norm
        t = x @ w
        tt = t @ t
        if tt <= 0:
            break
        p = x.T @ t / tt
        x = x - np.outer(t, p)
        y = y - (y @ t / tt) * t
        w_cols.append(w)
        p_cols.append(p)
        t_cols.append(t)
    if not w_cols:
        raise ValueError("degenerate data: no PLS component could be extracted")
    w_mat = np.column_stack(w_cols)
    p_mat = np.column_stack(p_cols)
    rotation = w_mat @ np.linalg.inv(p_mat.T @ w_mat)
    scores = np.column_stack(t_cols)
    gram = scores.T @ scores
    norms = np.sqrt(np.diag(gram))
    cos = gram / np.outer(norms, norms)
    off = np.abs(cos - np.diag(np.diag(cos)))
    if off.size and off.max() > PLS_ORTHOGONALITY_TOL:
        raise ArithmeticError(f"PLS scores lost orthogonality ({off.max():.2e})")
    return Projection(ProjectionKind.LINEAR, dataset.grid, weights=rotation, means=means,
                      info={"n_components": len(w_cols), "requested": c,
                            "x_weights": w_mat, "train_scores": scores})


# -- unified interface -------------------------------------------------------

def fit_selector(spec: SelectorSpec, dataset: FunctionalDataset) -> Projection:
    """Fit the method named by ``spec`` and return its projection."""
    from .maxima import MaximaConfig, mh_select

    m = spec.method
    params = spec.method_params
    if m is Method.BASE:
        return index_projection(dataset.grid, range(dataset.n_points), method="BASE")
    if m.is_maxima_hunting:
        cfg = MaximaConfig(h=int(params.get("h", 3)), max_vars=int(spec.target_dim))
        sel = mh_select(dataset, "V2" if m is Method.MHV else "R2",
                        params.get("estimator"), cfg)
    elif m is Method.T:
        sel = t_select(dataset, int(spec.target_dim))
    elif m.is_mrmr:
        sel = mrmr_select(dataset, int(spec.target_dim), m,
                          float(params.get("mi_width", 1.0)))
    elif m is Method.PLS:
        return pls_fit(dataset, int(spec.target_dim))
    else:  # pragma: no cover
        raise ValueError(f"unknown method {m}")
    return index_projection(dataset.grid, sel.indices, method=m.value, scores=sel.scores)


def select(spec: SelectorSpec, dataset: FunctionalDataset) -> SelectionResult:
    """Run a variable-selection method and return its :class:`SelectionResult`."""
    from .maxima import MaximaConfig, mh_select

    m = spec.method
    params = spec.method_params
    if m.is_maxima_hunting:
        cfg = MaximaConfig(h=int(params.get("h", 3)), max_vars=int(spec.target_dim))
        return mh_select(dataset, "V2" if m is Method.MHV else "R2",
                         params.get("estimator"), cfg)
    if m is Method.T:
        return t_select(dataset, int(spec.target_dim))
    if m.is_mrmr:
        return mrmr_select(dataset, int(spec.target_dim), m,
                           float(params.get("mi_width", 1.0)))
    if m is Method.BASE:
        return SelectionResult(range(dataset.n_points), [0.0] * dataset.n_points, "BASE")
    raise ValueError("PLS is a projection, not a variable selection; use pls_fit")
