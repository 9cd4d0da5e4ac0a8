import numpy as np
import pytest

from arx_core import ArxSpec, is_stationary, joint_law, make_covariates
from errors import InvalidArgumentError
from oracle import (
    expected_eljpd,
    expected_kl,
    fit_oracle,
    oracle_model,
    pacf_to_phi,
    phi_to_pacf,
    phi_to_unconstrained,
    unconstrained_to_phi,
)
from sarx_analytic import full_indices, make_model, predictive_params


def _setup(seed: int, T: int = 25, p: int = 1, q: int = 2):
    rng = np.random.default_rng(seed)
    Z = make_covariates(T, 3, seed)
    dgp = ArxSpec(phi=[0.6, 0.2], beta=[1.0, 0.5, 1.0], sigma2=1.0, Z=Z)
    phi = rng.uniform(-0.5, 0.5, p)
    model = make_model(Z[:, :q], phi, float(rng.uniform(0.6, 1.8)), [1.0, 0.5, 1.0][:q])
    return model, dgp


def _dense_expected_kl(model, dgp):
    law = joint_law(dgp)
    pred = predictive_params(model, full_indices(model.T))
    cov_p = law.covariance()
    cov_q = model.sigma2 * pred.V
    inv_q = np.linalg.inv(cov_q)
    gap = pred.D @ law.mean + pred.e - law.mean
    T = model.T
    return 0.5 * (
        np.trace(inv_q @ cov_p)
        + np.trace(inv_q @ pred.D @ cov_p @ pred.D.T)
        + gap @ inv_q @ gap
        - T
        + np.linalg.slogdet(cov_q)[1]
        - np.linalg.slogdet(cov_p)[1]
    )


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("p", [0, 1, 2])
def test_expected_kl_matches_dense_formula(seed, p):
    model, dgp = _setup(seed, p=p)

    assert expected_kl(model, dgp) == pytest.approx(_dense_expected_kl(model, dgp), rel=1e-8)


@pytest.mark.parametrize("seed", range(10))
def test_expected_kl_is_nonnegative(seed):
    model, dgp = _setup(seed, p=1 + seed % 2, q=1 + seed % 3)

    assert expected_kl(model, dgp) >= -1e-10


@pytest.mark.parametrize("seed", range(3))
def test_kl_and_eljpd_differ_by_the_true_entropy(seed):
    model, dgp = _setup(seed)
    entropy = 0.5 * dgp.T * np.log(2 * np.pi * np.e * dgp.sigma2)

    assert expected_kl(model, dgp) + expected_eljpd(model, dgp) == pytest.approx(-entropy, rel=1e-9)


def test_pacf_maps_are_inverse():
    pacf = np.array([0.3, -0.6])

    assert np.allclose(phi_to_pacf(pacf_to_phi(pacf)), pacf)
    assert np.allclose(pacf_to_phi([0.5]), [0.5])


def test_unconstrained_map_stays_stationary(rng):
    for _ in range(50):
        u = rng.normal(scale=1.5, size=2)
        phi = unconstrained_to_phi(u, (1, 2))
        assert is_stationary(phi, margin=0.0)
        assert np.allclose(phi_to_unconstrained(phi, (1, 2)), u, atol=1e-6)


def test_reparameterization_limits():
    assert np.allclose(unconstrained_to_phi([0.2], (2,)), np.tanh(0.2))
    with pytest.raises(InvalidArgumentError):
        unconstrained_to_phi([0.1, 0.1], (1, 3))
    with pytest.raises(InvalidArgumentError):
        phi_to_unconstrained([1.5], (1,))


def test_fit_recovers_a_correct_model_closely():
    Z = make_covariates(60, 2, 8)
    dgp = ArxSpec(phi=[0.5], beta=[1.0, 0.5], sigma2=1.0, Z=Z)
    model = make_model(Z, [0.0], 2.0, [1.0, 0.5])

    fitted, result = oracle_model(model, dgp)

    assert result.converged
    assert fitted.phi[0] == pytest.approx(0.5, abs=0.05)
    assert result.sigma2_hat == pytest.approx(1.0, rel=0.1)
    assert result.objective == pytest.approx(expected_kl(fitted, dgp), abs=1e-9)


def test_fit_without_ar_terms_only_tunes_sigma2():
    model, dgp = _setup(1, p=0)

    result = fit_oracle(model, dgp)

    assert result.phi_hat.size == 0
    assert result.sigma2_hat > dgp.sigma2
    assert set(result.as_row("a_")) == {"a_sigma2_hat", "a_objective", "a_converged"}


def test_fit_rejects_unsupported_models():
    model, dgp = _setup(0)
    with pytest.raises(InvalidArgumentError):
        fit_oracle(model, dgp, objective="bic")
    Z = make_covariates(25, 1, 0)
    wide = make_model(Z, [0.1, 0.1, 0.1], 1.0, [1.0])
    with pytest.raises(InvalidArgumentError):
        fit_oracle(wide, dgp)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_kl_and_elpd_objectives_pick_the_same_parameters(seed):
    model, dgp = _setup(seed, T=30)

    by_kl = fit_oracle(model, dgp, objective="kl")
    by_elpd = fit_oracle(model, dgp, objective="elpd")

    assert np.allclose(by_kl.phi_hat, by_elpd.phi_hat, rtol=0, atol=1e-6)
    assert by_kl.sigma2_hat == pytest.approx(by_elpd.sigma2_hat, rel=0, abs=1e-6)
