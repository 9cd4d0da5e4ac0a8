import asyncio

import pandas as pd
import pytest

import arxcv
import settings
from errors import InvalidArgumentError, NumericalFailureError
from experiments import SCHEME_CATALOGUE
from results_log import read_run_history


def _run(*argv):
    return asyncio.run(arxcv.main(list(argv)))


def test_plot_command_writes_svg_and_history(tmp_path, history_file):
    csv = tmp_path / "rates.csv"
    pd.DataFrame({"alpha": [0.0, 0.5, 1.0], "adverse_prob": [0.1, 0.2, 0.6]}).to_csv(csv, index=False)
    out = tmp_path / "rates.svg"

    code = _run("plot", "--csv", str(csv), "--kind", "line", "--out", str(out), "--out-dir", str(tmp_path))

    assert code == 0
    assert out.read_text().startswith("<svg")
    [entry] = asyncio.run(read_run_history())
    assert entry["command"] == "plot"
    assert entry["status"] == "ok"
    assert entry["outputs"] == [str(out)]


def test_simulate_writes_paths_and_covariates(tmp_path, history_file):
    code = _run("simulate", "--experiment", "3", "--n-paths", "3", "--seed", "5", "--out-dir", str(tmp_path))

    assert code == 0
    paths = pd.read_csv(tmp_path / "paths.csv")
    covariates = pd.read_csv(tmp_path / "covariates.csv")
    assert paths.shape == (3, 100)
    assert covariates.shape == (100, 3)
    assert (covariates["z1"] == 1.0).all()


def test_unreadable_experiment_config_exits_with_2(tmp_path, history_file):
    bad = tmp_path / "bad.json"
    bad.write_text("{")

    code = _run("adverse-rate", "--config", str(bad), "--out-dir", str(tmp_path))

    assert code == 2
    [entry] = asyncio.run(read_run_history())
    assert entry["status"].startswith("failed")


def test_settings_error_exits_before_running(tmp_path, history_file, monkeypatch):
    monkeypatch.setattr(settings, "CONFIG_LOAD_ERROR", "Configuration file not found")

    assert _run("simulate", "--out-dir", str(tmp_path)) == 2
    assert not (tmp_path / "paths.csv").exists()
    assert asyncio.run(read_run_history()) == []


def test_numerical_failure_exits_with_3(tmp_path, history_file, monkeypatch):
    def broken(*args, **kwargs):
        raise NumericalFailureError("integral did not converge", estimate=0.4)

    monkeypatch.setattr(arxcv, "elpd_distribution", broken)

    assert _run("elpd-dist", "--out-dir", str(tmp_path)) == 3


def test_unknown_scheme_label_exits_with_2(tmp_path, history_file):
    code = _run("sweep", "--axis", "scheme", "--values", "loo/pointwise;bootstrap", "--out-dir", str(tmp_path))

    assert code == 2


def test_argument_error_raised_mid_run_exits_with_3(tmp_path, history_file, monkeypatch):
    def broken(*args, **kwargs):
        raise InvalidArgumentError("test block outside the series")

    monkeypatch.setattr(arxcv, "elpd_distribution", broken)

    assert _run("elpd-dist", "--out-dir", str(tmp_path)) == 3
    [entry] = asyncio.run(read_run_history())
    assert entry["status"] == "failed: test block outside the series"


def test_unknown_table_variant_exits_with_2(tmp_path, history_file):
    assert _run("table", "--variants", "hard,medium", "--out-dir", str(tmp_path)) == 2
    assert not (tmp_path / "table.csv").exists()


def test_scheme_axis_values():
    assert arxcv._sweep_values("scheme", "all") == list(SCHEME_CATALOGUE)
    assert [s.kind for s in arxcv._sweep_values("scheme", "loo/pointwise; kfold(5)/joint")] == ["loo", "kfold"]
    assert arxcv._sweep_values("alpha", "0,0.5") == [0.0, 0.5]
    assert arxcv._sweep_values("v", "1,3") == [1, 3]
    assert arxcv._sweep_values("seed", "4,2") == [4, 2]


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        arxcv.build_parser().parse_args([])
