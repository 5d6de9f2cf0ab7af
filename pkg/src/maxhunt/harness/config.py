"""Experiment configuration: parsing, validation and serialization.

The config file is YAML (JSON is accepted too, being a subset). Example::

    name: demo
    seed: 2024
    models:
      - prop1
      - {name: prop2, params: {c: 1.0}}
      - {kind: logistic, marginal: {family: OU}, link: [{index: 30, coef: 10}]}
    train_sizes: [50, 100]
    replications: 20
    methods: [MHV, MHR, T, FCQ, MID, PLS, BASE]
    classifiers: [KNN, LDA]
    grids: {k: [1, 3, 5], dims: [1, 2, 3, 5], h: [1, 3, 8], pls_components: [1, 2, 3]}

``dataset: path.csv`` (with ``cv: {scheme: kfold, folds: 10}`` or
``cv: {scheme: loo}``) switches to real-data mode. ``methods`` x
``classifiers`` skips BASE x LDA; an explicit ``pipelines`` list naming that
pair is an error.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

import yaml

from ..dcov import Estimator, Measure
from ..selectors import Method
from ..simulation.models import ModelSpec, ModelSpecError, model_from_config


class ConfigError(ValueError):
    pass


class Classifier(str, Enum):
    KNN = "KNN"
    LDA = "LDA"


@dataclass(frozen=True)
class Pipeline:
    method: Method
    classifier: Classifier

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "classifier", Classifier(self.classifier))
        if self.method is Method.BASE and self.classifier is Classifier.LDA:
            raise ConfigError("BASE cannot be combined with LDA (full curves are too "
                              "high-dimensional for a linear discriminant)")

    @property
    def name(self) -> str:
        return f"{self.method.value}+{self.classifier.value}"


DEFAULT_GRIDS = {
    "k": (1, 3, 5, 7, 9, 11),
    "dims": tuple(range(1, 21)),
    "h": (1, 2, 3, 5, 8, 12),
    "pls_components": tuple(range(1, 11)),
}


@dataclass(frozen=True)
class HyperGrid:
    k: tuple[int, ...] = DEFAULT_GRIDS["k"]
    dims: tuple[int, ...] = DEFAULT_GRIDS["dims"]
    h: tuple[int, ...] = DEFAULT_GRIDS["h"]
    pls_components: tuple[int, ...] = DEFAULT_GRIDS["pls_components"]

    def __post_init__(self):
        for name in ("k", "dims", "h", "pls_components"):
            values = tuple(int(v) for v in getattr(self, name))
            if not values:
                raise ConfigError(f"grid '{name}' must not be empty")
            if any(v < 1 for v in values):
                raise ConfigError(f"grid '{name}' values must be >= 1")
            object.__setattr__(self, name, tuple(sorted(set(values))))
        if any(k % 2 == 0 for k in self.k):
            raise ConfigError("k grid must contain odd values only")

    def to_dict(self) -> dict:
        return {"k": list(self.k), "dims": list(self.dims), "h": list(self.h),
                "pls_components": list(self.pls_components)}


@dataclass(frozen=True)
class CVScheme:
    scheme: str = "kfold"
    folds: int = 10

    def __post_init__(self):
        if self.scheme not in ("kfold", "loo"):
            raise ConfigError("cv scheme must be 'kfold' or 'loo'")
        if self.scheme == "kfold" and int(self.folds) < 2:
            raise ConfigError("k-fold CV needs folds >= 2")

    def to_dict(self) -> dict:
        return {"scheme": self.scheme, "folds": int(self.folds)} if self.scheme == "kfold" \
            else {"scheme": "loo"}


@dataclass(frozen=True)
class RunOptions:
    """Estimator and fitting options shared by every pipeline."""

    v2_estimator: Estimator = Estimator.U
    r2_estimator: Estimator = Estimator.DC
    lda_regularization: float = 1e-8
    mi_width: float = 1.0

    def estimator_for(self, measure: Measure) -> Estimator:
        return self.v2_estimator if measure is Measure.V2 else self.r2_estimator


@dataclass(frozen=True)
class ExperimentConfig:
    pipelines: tuple[Pipeline, ...]
    models: tuple[ModelSpec, ...] = ()
    dataset: str | None = None
    train_sizes: tuple[int, ...] = (30, 50, 100, 200)
    replications: int = 1
    replication_offset: int = 0
    validation_size: int = 200
    test_size: int = 200
    cv: CVScheme = CVScheme()
    grids: HyperGrid = HyperGrid()
    options: RunOptions = RunOptions()
    seed: int = 0
    name: str = "experiment"

    def __post_init__(self):
        if not self.pipelines:
            raise ConfigError("at least one method/classifier pipeline is required")
        if self.dataset is None and not self.models:
            raise ConfigError("config needs 'models' (simulation) or 'dataset' (real data)")
        if self.dataset is not None and self.models:
            raise ConfigError("give either 'models' or 'dataset', not both")
        if int(self.replications) < 1:
            raise ConfigError("replications must be >= 1")
        if int(self.replication_offset) < 0:
            raise ConfigError("replication_offset must be >= 0")
        if not self.train_sizes or any(int(n) < 4 for n in self.train_sizes):
            raise ConfigError("train_sizes must be non-empty with every size >= 4")
        if int(self.validation_size) < 1 or int(self.test_size) < 1:
            raise ConfigError("validation and test sizes must be >= 1")
        names = [p.name for p in self.pipelines]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate pipelines in config")

    @property
    def simulation_mode(self) -> bool:
        return self.dataset is None

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"name": self.name, "seed": int(self.seed)}
        if self.simulation_mode:
            d["models"] = [m.to_dict() for m in self.models]
            d["train_sizes"] = [int(n) for n in self.train_sizes]
            d["replications"] = int(self.replications)
            d["replication_offset"] = int(self.replication_offset)
            d["validation_size"] = int(self.validation_size)
            d["test_size"] = int(self.test_size)
        else:
            d["dataset"] = str(self.dataset)
            d["cv"] = self.cv.to_dict()
        d["pipelines"] = [{"method": p.method.value, "classifier": p.classifier.value}
                          for p in self.pipelines]
        d["grids"] = self.grids.to_dict()
        d["estimators"] = {"V2": self.options.v2_estimator.value,
                           "R2": self.options.r2_estimator.value}
        d["lda_regularization"] = self.options.lda_regularization
        d["mi_width"] = self.options.mi_width
        return d


_KNOWN_KEYS = {
    "name", "seed", "models", "model", "dataset", "train_sizes", "replications",
    "replication_offset", "validation_size", "test_size", "cv", "methods", "classifiers",
    "pipelines", "grids", "estimators", "lda_regularization", "mi_width", "run",
}


def _pipelines(d: Mapping[str, Any]) -> tuple[Pipeline, ...]:
    if "pipelines" in d:
        out = []
        for entry in d["pipelines"] or []:
            if isinstance(entry, str):
                method, _, clf = entry.partition("+")
                entry = {"method": method, "classifier": clf or "KNN"}
            out.append(Pipeline(entry["method"], entry.get("classifier", "KNN")))
        return tuple(out)
    methods = d.get("methods")
    if not methods:
        raise ConfigError("'methods' must be a non-empty list")
    classifiers = d.get("classifiers", ["KNN"])
    if not classifiers:
        raise ConfigError("'classifiers' must be a non-empty list")
    out = []
    for clf in classifiers:
        for method in methods:
            if Method(method) is Method.BASE and Classifier(clf) is Classifier.LDA:
                continue
            out.append(Pipeline(method, clf))
    return tuple(out)


def config_from_dict(d: Mapping[str, Any], seed: int | None = None) -> ExperimentConfig:
    """Build and validate a config; ``seed`` overrides the file's seed."""
    if not isinstance(d, Mapping):
        raise ConfigError("config must be a mapping")
    unknown = set(d) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        models = d.get("models")
        if models is None and "model" in d:
            models = [d["model"]]
        model_specs = tuple(model_from_config(m) for m in (models or []))
        grids = HyperGrid(**{k: tuple(v) for k, v in (d.get("grids") or {}).items()})
        est = d.get("estimators") or {}
        options = RunOptions(Estimator(est.get("V2", "U")), Estimator(est.get("R2", "DC")),
                             float(d.get("lda_regularization", 1e-8)),
                             float(d.get("mi_width", 1.0)))
        cv = d.get("cv") or {}
        return ExperimentConfig(
            pipelines=_pipelines(d),
            models=model_specs,
            dataset=d.get("dataset"),
            train_sizes=tuple(int(n) for n in d.get("train_sizes", (30, 50, 100, 200))),
            replications=int(d.get("replications", 1)),
            replication_offset=int(d.get("replication_offset", 0)),
            validation_size=int(d.get("validation_size", 200)),
            test_size=int(d.get("test_size", 200)),
            cv=CVScheme(cv.get("scheme", "kfold"), int(cv.get("folds", 10))),
            grids=grids,
            options=options,
            seed=int(seed if seed is not None else d.get("seed", 0)),
            name=str(d.get("name", "experiment")),
        )
    except ConfigError:
        raise
    except (ModelSpecError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def load_config(path: str | Path, seed: int | None = None) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    cfg = config_from_dict(raw or {}, seed)
    if cfg.dataset is not None and not Path(cfg.dataset).is_absolute():
        resolved = (Path(path).parent / cfg.dataset)
        if resolved.exists():
            cfg = replace(cfg, dataset=str(resolved))
    return cfg
