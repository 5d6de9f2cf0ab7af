"""Experiment protocol, cross-validation, rankings and reports."""
from .config import (Classifier, ConfigError, CVScheme, ExperimentConfig, HyperGrid, Pipeline,
                     RunOptions, config_from_dict, load_config)
from .crossval import CVResult, StratificationError, cross_validate, stratified_folds
from .experiment import AggregateRow, ExperimentReport, RawRow, aggregate, run_experiment
from .pipeline import (Choice, FittedPipeline, Params, fit_pipeline, validate_by_folds,
                       validate_hyperparams)
from .ranking import Criterion, RankingTable, rank_methods, row_points
from .report import emit_report, read_aggregates, read_raw
