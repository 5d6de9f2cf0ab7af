"""Declarative simulation models and the representative model registry.

Three kinds of model:

``conditional``
    one process law per class and ``p = P(Y = 1)``;
``logistic``
    one marginal law for X and ``P(Y = 1 | X) = 1 / (1 + exp(-Psi(X)))`` with
    ``Psi`` a sum of monomials ``coef * x_j ** power``. Indices ``j`` are
    1-based grid positions, so ``x_30`` is the 30th grid point;
``mixture``
    per class, a weighted list of process laws; the component is drawn first.

Specs round-trip through plain dicts (:meth:`ModelSpec.to_dict` /
:meth:`ModelSpec.from_dict`) for the experiment config format.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Mapping, Sequence

import numpy as np
from scipy.special import expit

from ..core import FunctionalDataset, Grid
from .processes import (bridge_grid, default_grid, phi_peak, sample_brownian,
                        sample_brownian_bridge, sample_ou, smooth_trajectory)

#: bandwidths of the two smoothing levels when a model does not set one
SMOOTH_BANDWIDTH = {"sB": 0.05, "ssB": 0.10}


class ModelSpecError(ValueError):
    pass


class TrendKind(str, Enum):
    NONE = "none"
    LINEAR = "linear"
    STOCHASTIC = "stochastic"
    PEAK = "peak"
    TABULATED = "tabulated"


class Family(str, Enum):
    BROWNIAN = "Brownian"
    BRIDGE = "BrownianBridge"
    OU = "OU"
    SMOOTHED = "Smoothed"


@dataclass(frozen=True)
class TrendSpec:
    """Mean function added to a base process.

    ``linear``: ``c * t``; ``stochastic``: ``theta * t`` with a fresh
    ``theta ~ N(0, scale)`` per trajectory; ``peak``: ``scale * Phi_{m,k}(t)``;
    ``tabulated``: linear interpolation through ``(times, values)``.
    """

    kind: TrendKind = TrendKind.NONE
    c: float = 1.0
    m: int = 1
    k: int = 1
    times: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", TrendKind(self.kind))
        if self.kind is TrendKind.PEAK and (self.m < 1 or not 1 <= self.k <= 2 ** (self.m - 1)):
            raise ModelSpecError(f"invalid peak indices m={self.m}, k={self.k}")
        if self.kind is TrendKind.TABULATED:
            if len(self.times) < 2 or len(self.times) != len(self.values):
                raise ModelSpecError("tabulated trend needs matching times/values (>= 2)")
            object.__setattr__(self, "times", tuple(map(float, self.times)))
            object.__setattr__(self, "values", tuple(map(float, self.values)))

    def evaluate(self, t: np.ndarray, rng: np.random.Generator, size: int) -> np.ndarray:
        """Trend values, shape ``(size, len(t))``."""
        if self.kind is TrendKind.NONE:
            return np.zeros((size, t.size))
        if self.kind is TrendKind.LINEAR:
            return np.broadcast_to(self.c * t, (size, t.size))
        if self.kind is TrendKind.STOCHASTIC:
            theta = self.c * rng.standard_normal(size)
            return theta[:, None] * t[None, :]
        if self.kind is TrendKind.PEAK:
            return np.broadcast_to(self.c * phi_peak(self.m, self.k, t), (size, t.size))
        return np.broadcast_to(np.interp(t, self.times, self.values), (size, t.size))

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"kind": self.kind.value}
        if self.kind in (TrendKind.LINEAR, TrendKind.STOCHASTIC, TrendKind.PEAK):
            d["c"] = self.c
        if self.kind is TrendKind.PEAK:
            d.update(m=self.m, k=self.k)
        if self.kind is TrendKind.TABULATED:
            d.update(times=list(self.times), values=list(self.values))
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any] | None) -> "TrendSpec":
        if not d:
            return cls()
        d = dict(d)
        kind = TrendKind(d.pop("kind", "none"))
        default_c = 1.0
        return cls(kind, float(d.get("c", default_c)), int(d.get("m", 1)), int(d.get("k", 1)),
                   tuple(d.get("times", ())), tuple(d.get("values", ())))


NO_TREND = TrendSpec()


@dataclass(frozen=True)
class ProcessSpec:
    """A base process family plus an optional trend.

    ``params``: ``a``, ``b`` for OU (default 1, 1); ``bandwidth`` and
    ``base`` for Smoothed (base defaults to Brownian); ``scale`` multiplies
    the centred process for every family (default 1).
    """

    family: Family = Family.BROWNIAN
    trend: TrendSpec = NO_TREND
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        params = dict(self.params)
        if self.family is Family.OU:
            params.setdefault("a", 1.0)
            params.setdefault("b", 1.0)
            if float(params["a"]) <= 0 or float(params["b"]) <= 0:
                raise ModelSpecError("OU needs positive a and b")
        if self.family is Family.SMOOTHED:
            if "bandwidth" not in params:
                raise ModelSpecError("Smoothed process needs a bandwidth")
            if float(params["bandwidth"]) <= 0:
                raise ModelSpecError("bandwidth must be positive")
            base = Family(params.get("base", Family.BROWNIAN.value))
            if base is Family.SMOOTHED:
                raise ModelSpecError("Smoothed base must be a non-smoothed family")
            params["base"] = base.value
        object.__setattr__(self, "params", params)

    @property
    def uses_bridge(self) -> bool:
        return self.family is Family.BRIDGE or (
            self.family is Family.SMOOTHED and self.params["base"] == Family.BRIDGE.value)

    def sample(self, grid, rng: np.random.Generator, size: int) -> np.ndarray:
        t = grid.points if isinstance(grid, Grid) else np.asarray(grid, dtype=np.float64)
        x = self._centred(t, rng, size, self.family)
        scale = float(self.params.get("scale", 1.0))
        if scale != 1.0:
            x = scale * x
        if self.trend.kind is not TrendKind.NONE:
            x = x + self.trend.evaluate(t, rng, size)
        return x

    def _centred(self, t, rng, size, family) -> np.ndarray:
        if family is Family.BROWNIAN:
            return sample_brownian(t, rng, size)
        if family is Family.BRIDGE:
            return sample_brownian_bridge(t, rng, size)
        if family is Family.OU:
            return sample_ou(t, rng, float(self.params["a"]), float(self.params["b"]), size=size)
        base = self._centred(t, rng, size, Family(self.params["base"]))
        return smooth_trajectory(base, t, float(self.params["bandwidth"]))

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"family": self.family.value}
        if self.trend.kind is not TrendKind.NONE:
            d["trend"] = self.trend.to_dict()
        if self.params:
            d["params"] = dict(self.params)
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ProcessSpec":
        return cls(Family(d.get("family", "Brownian")), TrendSpec.from_dict(d.get("trend")),
                   dict(d.get("params", {})))


@dataclass(frozen=True)
class Monomial:
    """``coef * x_index ** power`` with a 1-based grid index."""

    index: int
    power: int = 1
    coef: float = 1.0


class ModelKind(str, Enum):
    CONDITIONAL = "conditional"
    LOGISTIC = "logistic"
    MIXTURE = "mixture"


@dataclass(frozen=True)
class ModelSpec:
    kind: ModelKind
    name: str = ""
    p: float = 0.5
    class0: ProcessSpec | None = None
    class1: ProcessSpec | None = None
    marginal: ProcessSpec | None = None
    link: tuple[Monomial, ...] = ()
    mixture0: tuple[tuple[float, ProcessSpec], ...] = ()
    mixture1: tuple[tuple[float, ProcessSpec], ...] = ()
    n_points: int = 100

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        object.__setattr__(self, "link", tuple(self.link))
        if self.kind is ModelKind.CONDITIONAL:
            if self.class0 is None or self.class1 is None:
                raise ModelSpecError("conditional model needs class0 and class1 processes")
        if self.kind in (ModelKind.CONDITIONAL, ModelKind.MIXTURE) and not 0 < self.p < 1:
            raise ModelSpecError("p must lie in (0, 1)")
        if self.kind is ModelKind.LOGISTIC:
            if self.marginal is None:
                raise ModelSpecError("logistic model needs a marginal process")
            for mono in self.link:
                if not 1 <= mono.index <= self.n_points:
                    raise ModelSpecError(f"link index {mono.index} outside 1..{self.n_points}")
        if self.kind is ModelKind.MIXTURE:
            for comps in (self.mixture0, self.mixture1):
                if not comps:
                    raise ModelSpecError("mixture needs components for both classes")
                w = np.array([c[0] for c in comps], dtype=np.float64)
                if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-9:
                    raise ModelSpecError("mixture weights must be positive and sum to 1")

    def processes(self) -> list[ProcessSpec]:
        if self.kind is ModelKind.CONDITIONAL:
            return [self.class0, self.class1]
        if self.kind is ModelKind.LOGISTIC:
            return [self.marginal]
        return [c[1] for c in self.mixture0 + self.mixture1]

    def grid(self) -> Grid:
        """The default grid, or its bridge variant when any law is bridge-based."""
        if any(proc.uses_bridge for proc in self.processes()):
            return bridge_grid(self.n_points)
        return default_grid(self.n_points)

    def psi(self, x: np.ndarray) -> np.ndarray:
        """Logistic link evaluated on trajectories (rows of ``x``)."""
        x = np.atleast_2d(x)
        out = np.zeros(x.shape[0])
        for mono in self.link:
            out += mono.coef * x[:, mono.index - 1] ** mono.power
        return out

    def eta(self, x: np.ndarray) -> np.ndarray:
        return expit(self.psi(x))

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"kind": self.kind.value}
        if self.name:
            d["name"] = self.name
        if self.n_points != 100:
            d["n_points"] = self.n_points
        if self.kind is ModelKind.CONDITIONAL:
            d.update(p=self.p, class0=self.class0.to_dict(), class1=self.class1.to_dict())
        elif self.kind is ModelKind.LOGISTIC:
            d.update(marginal=self.marginal.to_dict(),
                     link=[{"index": m.index, "power": m.power, "coef": m.coef}
                           for m in self.link])
        else:
            d.update(p=self.p,
                     class0=[{"weight": w, "process": s.to_dict()} for w, s in self.mixture0],
                     class1=[{"weight": w, "process": s.to_dict()} for w, s in self.mixture1])
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ModelSpec":
        try:
            kind = ModelKind(d["kind"])
            common = {"name": d.get("name", ""), "n_points": int(d.get("n_points", 100))}
            if kind is ModelKind.CONDITIONAL:
                return cls(kind, p=float(d.get("p", 0.5)),
                           class0=ProcessSpec.from_dict(d["class0"]),
                           class1=ProcessSpec.from_dict(d["class1"]), **common)
            if kind is ModelKind.LOGISTIC:
                link = tuple(Monomial(int(m["index"]), int(m.get("power", 1)),
                                      float(m.get("coef", 1.0))) for m in d.get("link", []))
                return cls(kind, marginal=ProcessSpec.from_dict(d["marginal"]), link=link,
                           **common)

            def comps(items):
                return tuple((float(c["weight"]), ProcessSpec.from_dict(c["process"]))
                             for c in items)
            return cls(kind, p=float(d.get("p", 0.5)), mixture0=comps(d["class0"]),
                       mixture1=comps(d["class1"]), **common)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ModelSpecError):
                raise
            raise ModelSpecError(f"invalid model spec: {exc}") from exc


def sample_model(model: ModelSpec, n: int, rng: np.random.Generator,
                 grid: Grid | None = None) -> FunctionalDataset:
    """Draw ``n`` labelled trajectories from ``model``.

    Draw order is fixed (labels, then class-0 block, then class-1 block; or
    trajectories, then labels for logistic models), so a given generator
    state always yields the same dataset.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    grid = grid or model.grid()
    if model.kind is ModelKind.LOGISTIC:
        x = model.marginal.sample(grid, rng, n)
        y = (rng.random(n) < model.eta(x)).astype(np.int8)
        return FunctionalDataset(grid, x, y)
    y = (rng.random(n) < model.p).astype(np.int8)
    x = np.empty((n, len(grid)))
    for label in (0, 1):
        rows = np.flatnonzero(y == label)
        if rows.size == 0:
            continue
        if model.kind is ModelKind.CONDITIONAL:
            proc = model.class0 if label == 0 else model.class1
            x[rows] = proc.sample(grid, rng, rows.size)
            continue
        comps = model.mixture0 if label == 0 else model.mixture1
        weights = np.array([c[0] for c in comps])
        which = rng.choice(len(comps), size=rows.size, p=weights / weights.sum())
        for ci, (_, proc) in enumerate(comps):
            sel = rows[which == ci]
            if sel.size:
                x[sel] = proc.sample(grid, rng, sel.size)
    return FunctionalDataset(grid, x, y)


# -- registry -----------------------------------------------------------------

BROWNIAN = ProcessSpec(Family.BROWNIAN)


def _ou(a=1.0, b=1.0, trend=NO_TREND):
    return ProcessSpec(Family.OU, trend, {"a": a, "b": b})


def _smoothed(level: str, trend=NO_TREND):
    return ProcessSpec(Family.SMOOTHED, trend, {"bandwidth": SMOOTH_BANDWIDTH[level]})


def prop1_model(p: float = 0.5) -> ModelSpec:
    """Brownian motion vs. Brownian motion plus ``theta t``, ``theta ~ N(0, 1)``."""
    return ModelSpec(ModelKind.CONDITIONAL, "prop1", p, BROWNIAN,
                     ProcessSpec(Family.BROWNIAN, TrendSpec(TrendKind.STOCHASTIC, 1.0)))


def prop2_model(c: float = 1.0, p: float = 0.5) -> ModelSpec:
    """Brownian motion vs. Brownian motion plus ``c t``."""
    return ModelSpec(ModelKind.CONDITIONAL, "prop2", p, BROWNIAN,
                     ProcessSpec(Family.BROWNIAN, TrendSpec(TrendKind.LINEAR, c)))


def prop3_model(m: int = 2, k: int = 1, p: float = 0.5) -> ModelSpec:
    """Brownian motion vs. Brownian motion plus the peak ``Phi_{m,k}``."""
    return ModelSpec(ModelKind.CONDITIONAL, "prop3", p, BROWNIAN,
                     ProcessSpec(Family.BROWNIAN, TrendSpec(TrendKind.PEAK, 1.0, m, k)))


def logistic_model(name: str, marginal: ProcessSpec, terms: Sequence[tuple]) -> ModelSpec:
    """``terms``: ``(index, power, coef)`` triples with 1-based indices."""
    return ModelSpec(ModelKind.LOGISTIC, name, marginal=marginal,
                     link=tuple(Monomial(*t) for t in terms))


def _registry() -> dict:
    return {
        "prop1": prop1_model,
        "prop2": prop2_model,
        "prop3": prop3_model,
        "bridge_vs_brownian": lambda p=0.5: ModelSpec(
            ModelKind.CONDITIONAL, "bridge_vs_brownian", p, BROWNIAN,
            ProcessSpec(Family.BRIDGE)),
        "ou_vs_ou_trend": lambda c=1.0, p=0.5: ModelSpec(
            ModelKind.CONDITIONAL, "ou_vs_ou_trend", p, _ou(),
            _ou(trend=TrendSpec(TrendKind.LINEAR, c))),
        "sB_vs_sB_peak": lambda m=2, k=1, p=0.5: ModelSpec(
            ModelKind.CONDITIONAL, "sB_vs_sB_peak", p, _smoothed("sB"),
            _smoothed("sB", TrendSpec(TrendKind.PEAK, 1.0, m, k))),
        "null": lambda: logistic_model("null", _ou(), []),
        "L2": lambda a=1.0, b=1.0: logistic_model("L2", _ou(a, b), [(30, 1, 10.0), (70, 1, 10.0)]),
        "L2_OUt": lambda: logistic_model(
            "L2_OUt", _ou(trend=TrendSpec(TrendKind.LINEAR, 1.0)), [(30, 1, 10.0), (70, 1, 10.0)]),
        "L8": lambda: logistic_model("L8", _ou(),
                                     [(50, 4, 10.0), (80, 3, 50.0), (30, 2, 20.0)]),
        "L_B": lambda: logistic_model("L_B", BROWNIAN, [(50, 1, 5.0), (90, 1, -5.0)]),
        "L_sB": lambda: logistic_model("L_sB", _smoothed("sB"), [(20, 1, 10.0), (60, 1, 10.0)]),
        "L_ssB": lambda: logistic_model("L_ssB", _smoothed("ssB"), [(40, 1, 10.0)]),
        "mix_trends": lambda p=0.5: ModelSpec(
            ModelKind.MIXTURE, "mix_trends", p,
            mixture0=((1.0, BROWNIAN),),
            mixture1=((0.5, ProcessSpec(Family.BROWNIAN, TrendSpec(TrendKind.LINEAR, 1.0))),
                      (0.5, ProcessSpec(Family.BROWNIAN, TrendSpec(TrendKind.PEAK, 1.0, 2, 1))))),
        "mix_ou": lambda p=0.5: ModelSpec(
            ModelKind.MIXTURE, "mix_ou", p,
            mixture0=((0.5, _ou()), (0.5, BROWNIAN)),
            mixture1=((0.5, _ou(trend=TrendSpec(TrendKind.LINEAR, 1.5))),
                      (0.5, ProcessSpec(Family.BROWNIAN, TrendSpec(TrendKind.STOCHASTIC, 1.0))))),
    }


def registry_names() -> list[str]:
    return sorted(_registry())


def get_model(name: str, **params) -> ModelSpec:
    """Instantiate a registered model; ``params`` are its keyword arguments."""
    reg = _registry()
    if name not in reg:
        raise ModelSpecError(f"unknown model {name!r}; known: {', '.join(sorted(reg))}")
    try:
        model = reg[name](**params)
    except TypeError as exc:
        raise ModelSpecError(f"bad parameters for model {name!r}: {exc}") from None
    return replace(model, name=name) if model.name != name else model


def model_from_config(entry: Mapping[str, Any] | str) -> ModelSpec:
    """Resolve a config entry: a registry name, ``{name: ..., params: {...}}``,
    or a full spec dict (with ``kind``)."""
    if isinstance(entry, str):
        return get_model(entry)
    if "kind" in entry:
        return ModelSpec.from_dict(entry)
    if "name" not in entry:
        raise ModelSpecError("model entry needs 'name' or a full spec with 'kind'")
    return get_model(entry["name"], **dict(entry.get("params", {})))
