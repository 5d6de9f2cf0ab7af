"""Command-line interface: ``maxhunt <subcommand> ...``.

Exit codes: 0 on success, 1 on a configuration or usage error, 2 on any
runtime failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import yaml

from .core import format_float, load_dataset, save_dataset
from .dcov import dependence_curve, save_curve
from .harness.config import Classifier, ConfigError, Pipeline, RunOptions, load_config
from .harness.experiment import run_experiment
from .harness.pipeline import Params, fit_pipeline
from .harness.report import emit_report, read_aggregates, rankings_from_aggregates, write_rankings
from .selectors import Method, SelectorSpec, select
from .simulation.models import ModelSpecError, get_model, model_from_config, sample_model
from .simulation.oracles import analytic_v2_curve, bayes_error
from .simulation.processes import RngStream, default_grid

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _params(pairs) -> dict:
    out = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ConfigError(f"--param expects key=value, got {pair!r}")
        out[key] = yaml.safe_load(value)
    return out


def _model(args):
    if args.model_file:
        with open(args.model_file, encoding="utf-8") as fh:
            return model_from_config(yaml.safe_load(fh))
    return get_model(args.model, **_params(args.param))


@contextmanager
def _output(args, filename: str):
    """Yield a writable path: ``<out-dir>/<filename>`` or a temp file echoed to stdout."""
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / filename
        yield path
        print(path)
    else:
        import tempfile

        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / filename
            yield path
            sys.stdout.write(path.read_text(encoding="utf-8"))


def cmd_simulate(args) -> int:
    model = _model(args)
    ds = sample_model(model, args.n, RngStream(args.seed, args.stream).generator())
    with _output(args, args.name or f"{model.name or 'model'}_n{args.n}.csv") as path:
        save_dataset(ds, path)
    return EXIT_OK


def cmd_curve(args) -> int:
    curve = dependence_curve(load_dataset(args.dataset), args.measure, args.estimator)
    with _output(args, "curve.csv") as path:
        save_curve(curve, path)
    return EXIT_OK


def cmd_select(args) -> int:
    params = _params(args.param)
    spec = SelectorSpec(args.method, args.dim, params)
    ds = load_dataset(args.dataset)
    result = select(spec, ds)
    with _output(args, "selection.json") as path:
        path.write_text(result.to_json(ds.grid) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_classify(args) -> int:
    pipeline = Pipeline(args.method, args.classifier)
    train, test = load_dataset(args.train), load_dataset(args.test)
    uses_k = pipeline.classifier is Classifier.KNN
    uses_dim = pipeline.method is not Method.BASE
    params = Params(args.dim if uses_dim else None,
                    args.h if pipeline.method.is_maxima_hunting else None,
                    args.k if uses_k else None)
    fitted = fit_pipeline(pipeline, params, train, RunOptions())
    acc = float(np.mean(fitted.predict(test) == test.labels))
    record = {"pipeline": pipeline.name, **params.as_dict(), "n_vars": fitted.n_vars,
              "train_accuracy": float(np.mean(fitted.predict(train) == train.labels)),
              "test_accuracy": acc}
    with _output(args, "classify.json") as path:
        path.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_experiment(args) -> int:
    config = load_config(args.config, seed=args.seed)
    report = run_experiment(config, threads=args.threads)
    out = Path(args.out_dir or "results")
    emit_report(report, out, threads=args.threads)
    print(f"{len(report.rows)} rows ({report.n_failed} failed) written to {out}")
    return EXIT_OK


def cmd_rank(args) -> int:
    rankings = rankings_from_aggregates(read_aggregates(args.aggregate))
    if not rankings:
        raise ConfigError("ranking needs at least two pipelines with complete results")
    with _output(args, "ranking.csv") as path:
        write_rankings(rankings, path)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.oracle == "curve":
        grid = default_grid(args.n_points)
        values = analytic_v2_curve(args.model, grid.points, args.p, args.c)
        with _output(args, "oracle_curve.csv") as path:
            lines = ["t,V2"] + [f"{format_float(t)},{format_float(v)}"
                                for t, v in zip(grid.points, values)]
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        model = _model(args)
        est = bayes_error(model, args.budget, RngStream(args.seed, 0).generator())
        record = {"model": model.name, "bayes_error": est.error, "std_error": est.std_error,
                  "budget": est.budget}
        with _output(args, "bayes_error.json") as path:
            path.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def _add_model_args(p):
    p.add_argument("--model", default="prop1", help="registered model name")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="model parameter (repeatable)")
    p.add_argument("--model-file", help="YAML file with a model spec (overrides --model)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="maxhunt", description=__doc__.splitlines()[0])
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed")
    common.add_argument("--threads", type=int, default=1, help="worker threads")
    common.add_argument("--out-dir", default=None,
                        help="output directory (single-file outputs go to stdout if omitted)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", parents=[common], help="sample a dataset CSV from a model")
    _add_model_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--name", help="output file name inside --out-dir")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("curve", parents=[common], help="dependence curve CSV of a dataset")
    p.add_argument("dataset")
    p.add_argument("--measure", choices=["V2", "R2", "T"], default="V2")
    p.add_argument("--estimator", choices=["U", "V", "DC"], default=None)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("select", parents=[common], help="run one variable-selection method")
    p.add_argument("dataset")
    p.add_argument("--method", default="MHV", choices=[m.value for m in Method if m is not Method.PLS])
    p.add_argument("--dim", type=int, default=10, help="number of variables")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="method parameter such as h=3 (repeatable)")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("classify", parents=[common], help="train/test accuracy of one pipeline")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--method", default="MHV", choices=[m.value for m in Method])
    p.add_argument("--classifier", default="KNN", choices=[c.value for c in Classifier])
    p.add_argument("--dim", type=int, default=5)
    p.add_argument("--h", type=int, default=3)
    p.add_argument("--k", type=int, default=5)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("experiment", parents=[common], help="run a study from a config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("rank", parents=[common], help="rankings from an aggregate CSV")
    p.add_argument("aggregate")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("oracle", help="analytic curve or Bayes error")
    osub = p.add_subparsers(dest="oracle", required=True, parser_class=_Parser)
    q = osub.add_parser("curve", parents=[common], help="analytic V2 curve on the default grid")
    q.add_argument("--model", choices=["prop1", "prop2", "stochastic", "linear"],
                   default="prop1")
    q.add_argument("--p", type=float, default=0.5)
    q.add_argument("--c", type=float, default=1.0)
    q.add_argument("--n-points", type=int, default=100)
    q = osub.add_parser("bayes-error", parents=[common], help="Monte-Carlo Bayes error")
    _add_model_args(q)
    q.add_argument("--budget", type=int, default=100_000)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.command != "experiment" and args.seed is None:
            args.seed = 0
        return args.func(args)
    except (_UsageError, ConfigError, ModelSpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - mapped to the runtime exit code
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
