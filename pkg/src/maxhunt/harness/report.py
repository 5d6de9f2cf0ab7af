"""Writing and reading experiment outputs.

``emit_report`` writes into one directory:

* ``aggregate.csv``: one row per (model, n, method, classifier);
* ``accuracy_table.csv``: mean accuracy, experiments x pipelines;
* ``variables_table.csv``: mean number of selected variables, same shape;
* ``ranking.csv``: relative, positional and F1 scores per pipeline;
* ``raw.csv``: one row per replication and pipeline;
* ``manifest.yaml``: the config (reloadable with ``load_config``) plus a
  ``run`` record with seed, package versions and kernel backend.

Floats are written with ``repr`` so they read back bit-identically.
"""
from __future__ import annotations

import csv
import platform
from pathlib import Path
from typing import Sequence

import numpy as np
import yaml

from .._backend import active_backend
from ..core import format_float
from .experiment import (AGGREGATE_FIELDS, RAW_FIELDS, AggregateRow, ExperimentReport, RawRow)
from .ranking import Criterion, RankingTable, rank_methods, table_from_aggregates

_INT_FIELDS = {"n", "replication", "dim", "h", "k", "mode_dim", "mode_h", "mode_k", "n_ok",
               "n_failed"}
_STR_FIELDS = {"model", "method", "classifier", "status", "error"}


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def _parse(name: str, text: str):
    if name in _STR_FIELDS:
        return text
    if text == "":
        return None
    return int(text) if name in _INT_FIELDS else float(text)


def _write_rows(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _read_records(path, cls, names):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != tuple(names):
            raise ValueError(f"{path}: expected columns {', '.join(names)}")
        return tuple(cls(**{k: _parse(k, v) for k, v in rec.items()}) for rec in reader)


def write_raw(rows: Sequence[RawRow], path) -> None:
    _write_rows(Path(path), RAW_FIELDS, [[getattr(r, f) for f in RAW_FIELDS] for r in rows])


def read_raw(path) -> tuple[RawRow, ...]:
    return _read_records(path, RawRow, RAW_FIELDS)


def write_aggregates(aggregates: Sequence[AggregateRow], path) -> None:
    _write_rows(Path(path), AGGREGATE_FIELDS,
                [[getattr(a, f) for f in AGGREGATE_FIELDS] for a in aggregates])


def read_aggregates(path) -> tuple[AggregateRow, ...]:
    return _read_records(path, AggregateRow, AGGREGATE_FIELDS)


def _pivot(aggregates, attr: str):
    experiments, pipelines = [], []
    cells = {}
    for a in aggregates:
        key = (a.model, a.n)
        if key not in experiments:
            experiments.append(key)
        if a.pipeline not in pipelines:
            pipelines.append(a.pipeline)
        cells[key, a.pipeline] = getattr(a, attr)
    rows = [[m, n, *[cells.get(((m, n), p)) for p in pipelines]] for m, n in experiments]
    return ["model", "n", *pipelines], rows


def rankings_from_aggregates(aggregates) -> list[RankingTable]:
    """One ranking per criterion; empty if fewer than two pipelines or no complete rows."""
    experiments, pipelines, matrix = table_from_aggregates(aggregates)
    if len(pipelines) < 2 or not experiments:
        return []
    return [rank_methods(matrix, c, pipelines) for c in Criterion]


def write_rankings(rankings: Sequence[RankingTable], path) -> None:
    if not rankings:
        _write_rows(Path(path), ["pipeline"], [])
        return
    methods = rankings[0].methods
    header = ["pipeline", *[r.criterion.value for r in rankings]]
    rows = [[m, *[float(r.scores[j]) for r in rankings]] for j, m in enumerate(methods)]
    _write_rows(Path(path), header, rows)


def _versions() -> dict:
    import scipy

    from .. import __version__

    return {"maxhunt": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def emit_report(report: ExperimentReport, out_dir, rankings: Sequence[RankingTable] | None = None,
                threads: int | None = None) -> dict[str, Path]:
    """Write every report file into ``out_dir`` (created if needed)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if rankings is None:
        rankings = rankings_from_aggregates(report.aggregates)
    paths = {name: out / f"{name}.csv" for name in
             ("aggregate", "accuracy_table", "variables_table", "ranking", "raw")}
    write_aggregates(report.aggregates, paths["aggregate"])
    _write_rows(paths["accuracy_table"], *_pivot(report.aggregates, "mean_accuracy"))
    _write_rows(paths["variables_table"], *_pivot(report.aggregates, "mean_vars"))
    write_rankings(rankings, paths["ranking"])
    write_raw(report.rows, paths["raw"])
    manifest = report.config.to_dict()
    manifest["run"] = {"seed": int(report.config.seed), "versions": _versions(),
                       "backend": active_backend(), "rows": len(report.rows),
                       "failed_rows": report.n_failed}
    if threads is not None:
        manifest["run"]["threads"] = int(threads)
    paths["manifest"] = out / "manifest.yaml"
    with open(paths["manifest"], "w", encoding="utf-8") as fh:
        yaml.safe_dump(manifest, fh, sort_keys=False)
    return paths
