"""Gaussian process trajectory generators on a discrete grid.

All samplers take a :class:`numpy.random.Generator` and an optional ``size``;
with ``size=None`` a single trajectory (shape ``(N,)``) is returned, otherwise
an ``(size, N)`` matrix. Distributions use the (mean, standard deviation)
convention, e.g. ``X(t) ~ N(0, sqrt(t))`` for Brownian motion.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Grid

DEFAULT_N_POINTS = 100


def default_grid(n_points: int = DEFAULT_N_POINTS) -> Grid:
    """Equispaced points ``(5 + i) / 105``, i = 1..100: t_1 = 6/105, t_100 = 1."""
    return Grid(np.arange(6, 6 + n_points) / 105.0)


def bridge_grid(n_points: int = DEFAULT_N_POINTS) -> Grid:
    """``(5 + i) / 106``: the default spacing pattern, stopping short of t = 1."""
    return Grid(np.arange(6, 6 + n_points) / 106.0)


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream keyed by a master seed and a stream id.

    ``generator(*sub)`` derives independent child streams (e.g. train,
    validation, test) without consuming state from the parent.
    """

    seed: int
    stream: int = 0

    def generator(self, *sub: int) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=int(self.seed),
                                    spawn_key=(int(self.stream), *map(int, sub)))
        return np.random.Generator(np.random.PCG64(ss))


def _as_points(grid) -> np.ndarray:
    return grid.points if isinstance(grid, Grid) else np.asarray(grid, dtype=np.float64)


def _shape(size):
    return (1,) if size is None else (int(size),)


def _finish(x: np.ndarray, size):
    return x[0] if size is None else x


def sample_brownian(grid, rng: np.random.Generator, size=None) -> np.ndarray:
    """Standard Brownian motion: independent N(0, sqrt(dt)) increments from B(0) = 0."""
    t = _as_points(grid)
    dt = np.diff(np.concatenate(([0.0], t)))
    if np.any(dt < 0):
        raise ValueError("grid must be non-decreasing and start at t >= 0")
    z = rng.standard_normal(_shape(size) + (t.size,))
    return _finish(np.cumsum(z * np.sqrt(dt), axis=1), size)


def sample_brownian_bridge(grid, rng: np.random.Generator, size=None) -> np.ndarray:
    """``B(t) - t B(1)`` with B simulated on the grid extended by t = 1."""
    t = _as_points(grid)
    ext = t if t[-1] == 1.0 else np.concatenate((t, [1.0]))
    b = np.atleast_2d(sample_brownian(ext, rng, size=1 if size is None else size))
    bb = b[:, :t.size] - t * b[:, -1:]
    return _finish(bb, size)


def sample_ou(grid, rng: np.random.Generator, a: float = 1.0, b: float = 1.0,
              mean=None, size=None) -> np.ndarray:
    """Stationary Gaussian process with covariance ``a exp(-b |s - t|)``.

    Exact AR(1) recursion between grid points; ``mean`` is an optional
    callable or array of mean values on the grid.
    """
    if a <= 0 or b <= 0:
        raise ValueError("OU parameters a and b must be positive")
    t = _as_points(grid)
    m = _mean_values(mean, t)
    shape = _shape(size)
    z = rng.standard_normal(shape + (t.size,))
    dev = np.empty(shape + (t.size,))
    dev[:, 0] = np.sqrt(a) * z[:, 0]
    for i in range(1, t.size):
        rho = np.exp(-b * (t[i] - t[i - 1]))
        dev[:, i] = rho * dev[:, i - 1] + np.sqrt(a * (1.0 - rho * rho)) * z[:, i]
    return _finish(dev + m, size)


def _mean_values(mean, t: np.ndarray) -> np.ndarray:
    if mean is None:
        return np.zeros_like(t)
    if callable(mean):
        return np.asarray(mean(t), dtype=np.float64) * np.ones_like(t)
    m = np.asarray(mean, dtype=np.float64)
    if m.shape != t.shape:
        raise ValueError("tabulated mean must have one value per grid point")
    return m


def _check_peak(m: int, k: int):
    if m < 1 or not 1 <= k <= 2 ** (m - 1):
        raise ValueError(f"peak function needs m >= 1 and 1 <= k <= 2^(m-1) (m={m}, k={k})")


def phi_peak(m: int, k: int, t):
    """Integrated Haar function: a triangular bump on ``[(2k-2)/2^m, 2k/2^m]``.

    Rises with slope ``sqrt(2^(m-1))`` up to ``(2k-1)/2^m`` and falls back to 0.
    """
    _check_peak(m, k)
    t = np.asarray(t, dtype=np.float64)
    lo, mid, hi = (2 * k - 2) / 2 ** m, (2 * k - 1) / 2 ** m, (2 * k) / 2 ** m
    slope = np.sqrt(2.0 ** (m - 1))
    out = np.where(t <= mid, slope * (t - lo), slope * (hi - t))
    out = np.where((t <= lo) | (t >= hi), 0.0, out)
    return out if out.ndim else float(out)


def peak_points(m: int, k: int) -> tuple[float, float, float]:
    """The three dyadic points the peak-trend Bayes rule depends on."""
    _check_peak(m, k)
    return (2 * k - 2) / 2 ** m, (2 * k - 1) / 2 ** m, (2 * k) / 2 ** m


def smooth_trajectory(trajectory, grid, bandwidth: float) -> np.ndarray:
    """Gaussian-kernel smoother with weights renormalized over the grid.

    Works on one trajectory or a matrix of them (rows).
    """
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    t = _as_points(grid)
    x = np.asarray(trajectory, dtype=np.float64)
    u = (t[:, None] - t[None, :]) / bandwidth
    w = np.exp(-0.5 * u * u)
    w /= w.sum(axis=1, keepdims=True)
    return x @ w.T
