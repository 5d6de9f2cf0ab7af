"""Closed-form Bayes rules and distance-covariance curves for Brownian models.

Models (``mu_0`` is standard Brownian motion in every case, ``p = P(Y=1)``,
``x1`` is the trajectory value at t = 1):

* stochastic trend: ``mu_1`` is the law of ``B(t) + theta t``, ``theta ~ N(0, 1)``;
* linear trend: ``mu_1`` is the law of ``B(t) + c t``;
* peak trend: ``mu_1`` is the law of ``B(t) + Phi_{m,k}(t)``.

The V^2 curves use the folded-normal mean ``E|N(m, s)|`` with exponent
``-m^2 / (2 s^2)``. :func:`folded_normal_mean` can also evaluate the variant
with exponent ``-m^2 / s^2`` so the two can be compared against simulation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit
from scipy.stats import norm

from .models import Family, ModelKind, ModelSpec, TrendKind
from .processes import peak_points


class NoBayesRuleError(ValueError):
    """The model has no implemented Bayes rule."""


def _check_p(p: float):
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")


# -- stochastic trend ---------------------------------------------------------

def eta_prop1(x1, p: float = 0.5):
    """``P(Y=1 | X)`` for the stochastic-trend model; depends on x(1) only."""
    _check_p(p)
    x1 = np.asarray(x1, dtype=np.float64)
    out = 1.0 / ((1 - p) / p * math.sqrt(2.0) * np.exp(-x1 ** 2 / 4) + 1.0)
    return out if out.ndim else float(out)


def prop1_threshold(p: float = 0.5) -> float:
    """``|x1|`` above which the stochastic-trend Bayes rule says 1.

    Returns 0 when the rule says 1 everywhere (``sqrt(2)(1-p)/p <= 1``).
    """
    _check_p(p)
    arg = 4.0 * math.log(math.sqrt(2.0) * (1 - p) / p)
    return math.sqrt(arg) if arg > 0 else 0.0


def bayes_rule_prop1(x1, p: float = 0.5):
    _check_p(p)
    x1 = np.asarray(x1, dtype=np.float64)
    out = (x1 ** 2 > 4.0 * math.log(math.sqrt(2.0) * (1 - p) / p)).astype(np.int8)
    return out if out.ndim else int(out)


# -- linear trend -------------------------------------------------------------

def eta_prop2(x1, c: float, p: float = 0.5):
    _check_p(p)
    if c == 0:
        raise ValueError("c must be non-zero")
    x1 = np.asarray(x1, dtype=np.float64)
    # [(1-p)/p exp(c^2/2 - c x1) + 1]^-1 written as a logistic for stability
    out = expit(c * x1 - c * c / 2 + math.log(p / (1 - p)))
    return out if out.ndim else float(out)


def prop2_threshold(c: float, p: float = 0.5) -> float:
    _check_p(p)
    if c == 0:
        raise ValueError("c must be non-zero")
    return c / 2 - math.log(p / (1 - p)) / c


def bayes_rule_prop2(x1, c: float, p: float = 0.5):
    """1 iff ``x1`` lies beyond ``c/2 - log(p/(1-p))/c`` on the side of ``c``."""
    thr = prop2_threshold(c, p)
    x1 = np.asarray(x1, dtype=np.float64)
    out = (x1 > thr) if c > 0 else (x1 < thr)
    out = out.astype(np.int8)
    return out if out.ndim else int(out)


# -- peak trend ---------------------------------------------------------------

def peak_statistic(x_left, x_mid, x_right):
    """``(x_mid - x_left) + (x_mid - x_right)`` at the three dyadic points."""
    return (np.asarray(x_mid) - x_left) + (np.asarray(x_mid) - x_right)


def eta_prop3(x_left, x_mid, x_right, m: int, k: int, p: float = 0.5):
    _check_p(p)
    peak_points(m, k)
    s = peak_statistic(x_left, x_mid, x_right)
    out = expit(2.0 ** ((m - 1) / 2) * s - 0.5 + math.log(p / (1 - p)))
    return out if np.ndim(out) else float(out)


def prop3_threshold(m: int, p: float = 0.5) -> float:
    _check_p(p)
    return 1.0 / math.sqrt(2.0 ** (m + 1)) - math.log(p / (1 - p)) / math.sqrt(2.0 ** (m - 1))


def bayes_rule_prop3(x_left, x_mid, x_right, m: int, k: int, p: float = 0.5):
    peak_points(m, k)
    out = (peak_statistic(x_left, x_mid, x_right) > prop3_threshold(m, p)).astype(np.int8)
    return out if out.ndim else int(out)


# -- V^2 curves ---------------------------------------------------------------

def folded_normal_mean(m, sigma, exponent: str = "corrected"):
    """``E|xi|`` for ``xi ~ N(m, sigma)`` (sigma a standard deviation).

    ``exponent="corrected"`` uses ``exp(-m^2 / (2 sigma^2))``, the true value;
    ``"printed"`` uses ``exp(-m^2 / sigma^2)``, kept only for comparison.
    """
    m = np.asarray(m, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    denom = {"corrected": 2.0, "printed": 1.0}[exponent]
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(sigma > 0, m / np.where(sigma > 0, sigma, 1.0), 0.0)
        out = (sigma * math.sqrt(2 / math.pi) * np.exp(-z * z / denom)
               + m * (2 * norm.cdf(z) - 1))
    out = np.where(sigma > 0, out, np.abs(m))
    return out if out.ndim else float(out)


def analytic_v2_curve(model: str, t, p: float = 0.5, c: float = 1.0):
    """Population ``V^2(X_t, Y)`` for the stochastic- or linear-trend model.

    ``model`` is ``"stochastic"`` (alias ``"prop1"``) or ``"linear"``
    (alias ``"prop2"``).
    """
    _check_p(p)
    t = np.asarray(t, dtype=np.float64)
    if np.any((t < 0) | (t > 1)):
        raise ValueError("t must lie in [0, 1]")
    const = 4 * p * p * (1 - p) ** 2
    i00 = np.sqrt(4 * t / math.pi)
    if model in ("stochastic", "prop1"):
        i01 = np.sqrt(2 * (t * t + 2 * t) / math.pi)
        i11 = np.sqrt(4 * (t * t + t) / math.pi)
        out = const * (i01 - 0.5 * (i00 + i11))
    elif model in ("linear", "prop2"):
        i01 = folded_normal_mean(c * t, np.sqrt(2 * t))
        out = const * (i01 - i00)
    else:
        raise ValueError(f"no analytic curve for model {model!r}")
    return out if out.ndim else float(out)


# -- Bayes error --------------------------------------------------------------

@dataclass(frozen=True)
class BayesErrorEstimate:
    error: float
    std_error: float
    budget: int


def _plain_brownian(proc) -> bool:
    return (proc.family is Family.BROWNIAN and proc.trend.kind is TrendKind.NONE
            and float(proc.params.get("scale", 1.0)) == 1.0)


def bayes_rule_for(model: ModelSpec):
    """Return ``(points, rule)`` where ``rule`` maps trajectory values at
    ``points`` (rows) to Bayes labels; raises :class:`NoBayesRuleError`."""
    if model.kind is ModelKind.CONDITIONAL and _plain_brownian(model.class0):
        proc = model.class1
        if proc.family is Family.BROWNIAN and float(proc.params.get("scale", 1.0)) == 1.0:
            trend = proc.trend
            if trend.kind is TrendKind.STOCHASTIC and trend.c == 1.0:
                return np.array([1.0]), lambda v: bayes_rule_prop1(v[:, 0], model.p)
            if trend.kind is TrendKind.LINEAR and trend.c != 0:
                return np.array([1.0]), lambda v: bayes_rule_prop2(v[:, 0], trend.c, model.p)
            if trend.kind is TrendKind.PEAK and trend.c == 1.0:
                pts = np.array(peak_points(trend.m, trend.k))
                return pts, lambda v: bayes_rule_prop3(v[:, 0], v[:, 1], v[:, 2],
                                                        trend.m, trend.k, model.p)
    if model.kind is ModelKind.LOGISTIC:
        grid = model.grid().points
        return grid, lambda v: (model.psi(v) > 0).astype(np.int8)
    raise NoBayesRuleError(f"no Bayes rule implemented for model {model.name or model.kind.value}")


def bayes_error(model: ModelSpec, budget: int, rng: np.random.Generator) -> BayesErrorEstimate:
    """Monte-Carlo estimate of ``P(g*(X) != Y)`` with its standard error."""
    points, rule = bayes_rule_for(model)
    if budget < 2:
        raise ValueError("budget must be >= 2")
    if model.kind is ModelKind.LOGISTIC:
        x = model.marginal.sample(points, rng, budget)
        y = (rng.random(budget) < model.eta(x)).astype(np.int8)
    else:
        y = (rng.random(budget) < model.p).astype(np.int8)
        x = np.empty((budget, points.size))
        for label, proc in ((0, model.class0), (1, model.class1)):
            rows = np.flatnonzero(y == label)
            if rows.size:
                x[rows] = proc.sample(points, rng, rows.size)
    wrong = (rule(x) != y).astype(np.float64)
    return BayesErrorEstimate(float(wrong.mean()), float(wrong.std(ddof=1) / math.sqrt(budget)),
                              budget)
