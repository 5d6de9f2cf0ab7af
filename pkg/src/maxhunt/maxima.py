"""Local maxima of a dependence curve and the maxima-hunting selector."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FunctionalDataset, SelectionResult
from .dcov import DependenceCurve, Measure, dependence_curve

#: window half-widths tried by the harness when none are configured
DEFAULT_H_GRID = (1, 2, 3, 5, 8, 12)


@dataclass(frozen=True)
class MaximaConfig:
    h: int = 3
    max_vars: int = 10

    def __post_init__(self):
        if int(self.h) < 1:
            raise ValueError("window half-width h must be >= 1")
        if int(self.max_vars) < 1:
            raise ValueError("max_vars must be >= 1")


def local_maxima(values, h: int) -> list[int]:
    """Indices that are strict maxima of their clipped window ``[i-h, i+h]``.

    Returned in decreasing order of value, ties by smaller index. Plateaus
    produce no maxima. ``values`` may be a :class:`DependenceCurve` or any
    1-D sequence.
    """
    v = np.asarray(values.values if isinstance(values, DependenceCurve) else values,
                   dtype=np.float64)
    n = v.size
    if not 1 <= h < n:
        raise ValueError(f"window half-width must satisfy 1 <= h < N (h={h}, N={n})")
    found = []
    for i in range(n):
        lo, hi = max(0, i - h), min(n - 1, i + h)
        window = v[lo:hi + 1]
        others = np.delete(window, i - lo)
        if np.all(v[i] > others):
            found.append(i)
    found.sort(key=lambda i: (-v[i], i))
    return found


def select_from_curve(curve: DependenceCurve, config: MaximaConfig,
                      method_id: str = "MH") -> SelectionResult:
    idx = local_maxima(curve, config.h)[:config.max_vars]
    return SelectionResult(idx, [curve.values[i] for i in idx], method_id,
                           {"h": config.h, "max_vars": config.max_vars,
                            "estimator": curve.estimator})


def mh_select(dataset: FunctionalDataset, measure="V2", estimator=None,
              config: MaximaConfig = MaximaConfig()) -> SelectionResult:
    """Maxima-hunting selection (MHV for V2, MHR for R2).

    Never pads: if fewer than ``config.max_vars`` maxima exist, all of them
    are returned, possibly none.
    """
    measure = Measure(measure)
    curve = dependence_curve(dataset, measure, estimator)
    method_id = "MHV" if measure is Measure.V2 else "MHR"
    return select_from_curve(curve, config, method_id)
