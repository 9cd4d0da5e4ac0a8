import logging

import numpy as np
import pytest

import selection_analysis
from arx_core import joint_law
from cv_schemes import Mode, SchemeSpec, make_plan
from errors import InvalidArgumentError
from experiments import ExperimentSpec, fit_pair
from gchisq import cdf, moments, params_from_quadform, simulate_quadform
from sarx_analytic import cv_quadform, evaluate
from selection_analysis import (
    ComparisonSetup,
    adverse_probability,
    cost_samples,
    expected_cost,
    is_well_separated,
    min_sample_size,
    scan_sample_size,
    selection_quadform,
    selection_summary,
)


@pytest.fixture(scope="module")
def pair():
    return fit_pair(ExperimentSpec(id=1, variant="hard", T=30, seed=5), alpha=0.75)


def test_cv_selection_form_is_the_difference_of_scores(pair):
    setup = pair.setup(SchemeSpec.kfold(5), 0.01)
    plan = make_plan(setup.scheme, setup.T)
    y = np.linspace(-1.0, 2.0, setup.T)

    omega = selection_quadform(setup)

    expected = evaluate(cv_quadform(setup.model_a, plan), y) - evaluate(cv_quadform(setup.model_b, plan), y)
    assert evaluate(omega, y) == pytest.approx(expected, rel=1e-10)


def test_adverse_probability_matches_simulation(pair):
    setup = pair.setup(SchemeSpec.loo(), 0.01)
    omega = selection_quadform(setup)
    draws = simulate_quadform(omega, joint_law(setup.dgp), 40_000, 3)

    prob = adverse_probability(setup)

    assert 0.0 <= prob <= 1.0
    assert prob == pytest.approx(np.mean(draws < 0), abs=4 * np.sqrt(0.25 / draws.size))


def test_swapping_models_complements_the_probability(pair):
    setup = pair.setup(SchemeSpec.hv_block(3, 3), 0.01)

    assert adverse_probability(setup) + adverse_probability(setup.swapped()) == pytest.approx(1.0, abs=1e-5)


def test_targets_and_summary(pair):
    setup = pair.setup(SchemeSpec.hv_block(3, 3, Mode.POINTWISE), 0.01)

    summary = selection_summary(setup)

    assert summary["scheme"] == "hv-block(3,3)/pointwise"
    assert summary["mode"] == "pointwise"
    assert summary["T"] == 30
    assert summary["q01"] < summary["mean"] < summary["q99"]
    assert selection_summary(setup, "eljpd")["scheme"] == "eljpd"
    assert selection_summary(setup, "elppd")["mode"] == "pointwise"
    with pytest.raises(InvalidArgumentError):
        selection_quadform(setup, "waic")


def test_setup_validation(pair):
    with pytest.raises(InvalidArgumentError):
        ComparisonSetup(pair.dgp, pair.model_a, pair.model_b, SchemeSpec.loo(), gamma=1.5)
    short = fit_pair(ExperimentSpec(id=3, T=20, seed=5), alpha=0.0)
    with pytest.raises(InvalidArgumentError):
        ComparisonSetup(pair.dgp, pair.model_a, short.model_b, SchemeSpec.loo())


def test_well_separated_threshold():
    assert is_well_separated(0.009)
    assert not is_well_separated(0.01)
    assert is_well_separated(0.04, gamma=0.05)


def test_cost_simulation_agrees_with_adverse_probability(pair):
    setup = pair.setup(SchemeSpec.loo(), 0.01)
    n = 20_000

    sample = cost_samples(setup, n, 17)
    summary = expected_cost(setup, n, 17)

    assert np.all(sample.costs >= 0)
    prob = adverse_probability(setup)
    assert summary["cv_chose_b_rate"] == pytest.approx(prob, abs=4 * np.sqrt(prob * (1 - prob) / n) + 1e-3)
    assert summary["expected_cost"] == pytest.approx(sample.costs.mean())


def _fake_probabilities(monkeypatch, table):
    monkeypatch.setattr(selection_analysis, "adverse_probability", lambda setup, target="cv": table(setup))


def test_binary_search_agrees_with_linear_scan(monkeypatch):
    _fake_probabilities(monkeypatch, lambda T: 0.5 * np.exp(-T / 50.0))

    found = min_sample_size(lambda T: T, gamma=0.01, lower=10, upper=2500)

    assert found == 196
    assert scan_sample_size(lambda T: T, gamma=0.01, lower=10, upper=400) == 196


def test_binary_search_edges(monkeypatch):
    _fake_probabilities(monkeypatch, lambda T: 0.0 if T >= 5 else 1.0)
    assert min_sample_size(lambda T: T, lower=10, upper=20) == 10

    _fake_probabilities(monkeypatch, lambda T: 0.5)
    assert min_sample_size(lambda T: T, lower=10, upper=20) is None


def test_non_monotone_probabilities_trigger_linear_scan(monkeypatch, caplog):
    _fake_probabilities(monkeypatch, lambda T: 0.0 if 250 <= T <= 260 or T >= 480 else 0.5)

    with caplog.at_level(logging.WARNING, logger="arxcv"):
        found = min_sample_size(lambda T: T, lower=10, upper=500)

    assert found == 250
    assert "not monotone" in caplog.text


@pytest.mark.slow
def test_selection_statistic_cdf_matches_simulation():
    pair40 = fit_pair(ExperimentSpec(id=1, variant="hard", T=40, seed=11), alpha=1.0)
    setup = pair40.setup(SchemeSpec.loo(), 0.01)
    omega = selection_quadform(setup)
    law = joint_law(setup.dgp)
    draws = simulate_quadform(omega, law, 200_000, 5)
    grid = np.quantile(draws, np.linspace(0.02, 0.98, 21))

    dist = params_from_quadform(omega, law)
    assert max(abs(cdf(dist, w) - np.mean(draws <= w)) for w in grid) < 0.01
    mean, var = moments(omega, law)
    assert abs(draws.mean() - mean) < 4 * np.sqrt(var / draws.size)
