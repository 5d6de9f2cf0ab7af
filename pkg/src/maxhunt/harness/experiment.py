"""Monte-Carlo experiments and real-data cross-validation studies.

Every replication ``r`` owns the stream ``RngStream(seed, replication_offset + r)``;
train, validation and test sets for model ``m`` and size ``n`` come from the
child generators ``(m, n, 0)``, ``(m, n, 1)`` and ``(m, n, 2)``. All pipelines
see the same datasets. Work units run on a thread pool but results are
collected in a fixed order, so the thread count never changes the output.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from ..core import load_dataset
from ..simulation.models import sample_model
from ..simulation.processes import RngStream
from .config import ExperimentConfig, Pipeline
from .crossval import cross_validate
from .pipeline import fit_pipeline, validate_hyperparams

OK = "ok"
FAILED = "failed"


@dataclass(frozen=True)
class RawRow:
    """Outcome of one pipeline on one replication."""

    model: str
    n: int
    replication: int
    method: str
    classifier: str
    status: str
    accuracy: float = math.nan
    n_vars: float = math.nan
    dim: int | None = None
    h: int | None = None
    k: int | None = None
    val_accuracy: float = math.nan
    error: str = ""

    @property
    def ok(self) -> bool:
        return self.status == OK


RAW_FIELDS = tuple(f.name for f in fields(RawRow))


@dataclass(frozen=True)
class AggregateRow:
    model: str
    n: int
    method: str
    classifier: str
    mean_accuracy: float
    se_accuracy: float
    mean_vars: float
    mode_dim: int | None
    mode_h: int | None
    mode_k: int | None
    n_ok: int
    n_failed: int

    @property
    def pipeline(self) -> str:
        return f"{self.method}+{self.classifier}"


AGGREGATE_FIELDS = tuple(f.name for f in fields(AggregateRow))


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    rows: tuple[RawRow, ...]
    aggregates: tuple[AggregateRow, ...]

    @property
    def n_failed(self) -> int:
        return sum(not r.ok for r in self.rows)


def _mode(values: Iterable):
    present = [v for v in values if v is not None]
    if not present:
        return None
    counts = Counter(present)
    top = max(counts.values())
    return min(v for v, c in counts.items() if c == top)


def aggregate(rows: Sequence[RawRow]) -> tuple[AggregateRow, ...]:
    """Reduce raw rows to one aggregate per (model, n, method, classifier).

    Groups keep first-appearance order and rows are reduced in replication
    order. Failed rows only contribute to ``n_failed``.
    """
    groups: dict[tuple, list[RawRow]] = {}
    for row in rows:
        groups.setdefault((row.model, row.n, row.method, row.classifier), []).append(row)
    out = []
    for (model, n, method, clf), members in groups.items():
        members = sorted(members, key=lambda r: r.replication)
        good = [r for r in members if r.ok]
        acc = np.array([r.accuracy for r in good], dtype=np.float64)
        nv = np.array([r.n_vars for r in good], dtype=np.float64)
        if acc.size:
            mean = float(acc.mean())
            se = float(acc.std(ddof=1) / math.sqrt(acc.size)) if acc.size > 1 else 0.0
            mean_vars = float(nv.mean())
        else:
            mean = se = mean_vars = math.nan
        out.append(AggregateRow(model, n, method, clf, mean, se, mean_vars,
                                _mode(r.dim for r in good), _mode(r.h for r in good),
                                _mode(r.k for r in good), len(good), len(members) - len(good)))
    return tuple(out)


def _model_names(config: ExperimentConfig) -> list[str]:
    names = []
    for i, m in enumerate(config.models):
        base = m.name or f"model{i}"
        names.append(base if base not in names else f"{base}#{i}")
    return names


def _failed(model: str, n: int, r: int, pipeline: Pipeline, exc: Exception) -> RawRow:
    return RawRow(model, n, r, pipeline.method.value, pipeline.classifier.value, FAILED,
                  error=f"{type(exc).__name__}: {exc}")


def _simulation_unit(config: ExperimentConfig, model_idx: int, model_name: str, n: int,
                     r: int) -> list[RawRow]:
    model = config.models[model_idx]
    stream = RngStream(config.seed, config.replication_offset + r)
    rows = []
    try:
        train = sample_model(model, n, stream.generator(model_idx, n, 0))
        val = sample_model(model, config.validation_size, stream.generator(model_idx, n, 1))
        test = sample_model(model, config.test_size, stream.generator(model_idx, n, 2))
    except Exception as exc:  # noqa: BLE001 - recorded per row
        return [_failed(model_name, n, r, p, exc) for p in config.pipelines]
    for pipeline in config.pipelines:
        try:
            choice = validate_hyperparams(pipeline, config.grids, train, val, config.options)
            fitted = fit_pipeline(pipeline, choice.params, train, config.options)
            acc = float(np.mean(fitted.predict(test) == test.labels))
            p = choice.params
            rows.append(RawRow(model_name, n, r, pipeline.method.value,
                               pipeline.classifier.value, OK, acc, float(fitted.n_vars),
                               p.dim, p.h, p.k, choice.accuracy))
        except Exception as exc:  # noqa: BLE001 - recorded per row
            rows.append(_failed(model_name, n, r, pipeline, exc))
    return rows


def _dataset_unit(config: ExperimentConfig, dataset, r: int) -> list[RawRow]:
    name = str(config.name)
    seed = int(np.random.SeedSequence(config.seed, spawn_key=(config.replication_offset + r,))
               .generate_state(1)[0])
    rows = []
    for pipeline in config.pipelines:
        try:
            res = cross_validate(dataset, pipeline, config.cv, config.grids, seed, config.options)
            p = res.modal_params
            rows.append(RawRow(name, dataset.n, r, pipeline.method.value,
                               pipeline.classifier.value, OK, res.accuracy,
                               float(np.mean(res.fold_n_vars)), p.dim, p.h, p.k))
        except Exception as exc:  # noqa: BLE001 - recorded per row
            rows.append(_failed(name, dataset.n, r, pipeline, exc))
    return rows


def run_experiment(config: ExperimentConfig, threads: int = 1) -> ExperimentReport:
    """Run every (model, train size, replication, pipeline) cell of ``config``.

    In real-data mode (``config.dataset`` set) each replication runs a nested
    cross-validation with its own fold seed.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    reps = range(int(config.replications))
    if config.simulation_mode:
        names = _model_names(config)
        units = [(mi, n, r) for mi in range(len(config.models)) for n in config.train_sizes
                 for r in reps]
        work = lambda u: _simulation_unit(config, u[0], names[u[0]], int(u[1]), u[2])  # noqa: E731
    else:
        dataset = load_dataset(config.dataset)
        units = list(reps)
        work = lambda r: _dataset_unit(config, dataset, r)  # noqa: E731
    if threads == 1:
        results = [work(u) for u in units]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, units))
    rows = tuple(row for unit_rows in results for row in unit_rows)
    return ExperimentReport(config, rows, aggregate(rows))
