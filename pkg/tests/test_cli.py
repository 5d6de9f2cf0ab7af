import csv
import json

import numpy as np
import pytest

from maxhunt.cli import main
from maxhunt.core import as_dataset, load_dataset, save_dataset
from maxhunt.simulation import RngStream, get_model, sample_model


@pytest.fixture
def data(tmp_path):
    model = get_model("prop2", c=2.0)
    train = sample_model(model, 40, RngStream(1).generator(0))
    test = sample_model(model, 60, RngStream(1).generator(1))
    save_dataset(train, tmp_path / "train.csv")
    save_dataset(test, tmp_path / "test.csv")
    return tmp_path


def test_simulate_is_seeded(tmp_path, capsys):
    args = ["simulate", "--model", "prop2", "--param", "c=1.5", "--n", "12", "--seed", "4"]
    assert main(args + ["--out-dir", str(tmp_path), "--name", "a.csv"]) == 0
    assert main(args + ["--out-dir", str(tmp_path), "--name", "b.csv"]) == 0
    a, b = load_dataset(tmp_path / "a.csv"), load_dataset(tmp_path / "b.csv")
    assert a.equals(b) and a.n == 12
    expected = sample_model(get_model("prop2", c=1.5), 12, RngStream(4, 0).generator())
    assert a.equals(expected)


def test_simulate_to_stdout(capsys):
    assert main(["simulate", "--n", "5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 6


def test_curve_and_select(data, capsys):
    assert main(["curve", str(data / "train.csv"), "--measure", "R2"]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert len(rows) == 101
    assert main(["select", str(data / "train.csv"), "--method", "MHV", "--dim", "3",
                 "--param", "h=2"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["method"] == "MHV" and len(record["indices"]) <= 3


def test_classify(data, capsys):
    assert main(["classify", "--train", str(data / "train.csv"), "--test",
                 str(data / "test.csv"), "--method", "T", "--classifier", "LDA",
                 "--dim", "2"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["pipeline"] == "T+LDA" and record["k"] is None
    assert 0.5 < record["test_accuracy"] <= 1.0


def test_experiment_and_rank(data, tmp_path, capsys):
    (tmp_path / "c.yaml").write_text(
        "models: [prop1, prop2]\ntrain_sizes: [30]\nreplications: 2\n"
        "methods: [MHV, T]\nvalidation_size: 40\ntest_size: 40\n"
        "grids: {k: [1, 3], dims: [1, 2], h: [2]}\n")
    out = tmp_path / "res"
    assert main(["experiment", str(tmp_path / "c.yaml"), "--out-dir", str(out),
                 "--seed", "8", "--threads", "2"]) == 0
    assert (out / "manifest.yaml").exists()
    assert main(["rank", str(out / "aggregate.csv")]) == 0
    text = capsys.readouterr().out
    assert "pipeline,relative,positional,F1" in text


def test_oracles(capsys):
    assert main(["oracle", "curve", "--model", "stochastic"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0] == "t,V2" and float(rows[-1].split(",")[1]) == pytest.approx(0.0049756,
                                                                               abs=1e-7)
    assert main(["oracle", "bayes-error", "--model", "null", "--budget", "2000"]) == 0
    assert json.loads(capsys.readouterr().out)["bayes_error"] == pytest.approx(0.5, abs=0.05)


@pytest.mark.parametrize("argv", [
    ["nosuch"],
    ["simulate"],
    ["simulate", "--n", "5", "--model", "nope"],
    ["simulate", "--n", "5", "--param", "novalue"],
    ["simulate", "--n", "5", "--threads", "0"],
    ["classify", "--train", "x", "--test", "y", "--method", "BASE", "--classifier", "LDA"],
])
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_bad_config_exit_1(tmp_path):
    (tmp_path / "c.yaml").write_text("methods: [T]\nbogus: 1\n")
    assert main(["experiment", str(tmp_path / "c.yaml")]) == 1


def test_runtime_errors_exit_2(tmp_path, capsys):
    assert main(["curve", str(tmp_path / "missing.csv")]) == 2
    one_class = as_dataset(np.random.default_rng(0).normal(size=(6, 4)), [0] * 6)
    save_dataset(one_class, tmp_path / "one.csv")
    assert main(["curve", str(tmp_path / "one.csv")]) == 2
    assert "error" in capsys.readouterr().err
