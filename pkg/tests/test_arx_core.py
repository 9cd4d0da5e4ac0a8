import numpy as np
import pytest
from scipy import stats

import arx_core
from arx_core import (
    ArxSpec,
    MarginalPrecision,
    apply_coeff,
    apply_coeff_transpose,
    build_coeff_matrix,
    dgp_from_alpha,
    is_stationary,
    joint_law,
    log_density,
    make_covariates,
    simulate,
    solve_coeff,
)
from errors import InvalidArgumentError


def _spec(T=12, phi=(0.6, -0.2), beta=(1.0, 0.5), lags=None):
    Z = make_covariates(T, len(beta), 99)
    return ArxSpec(phi=phi, beta=beta, sigma2=1.5, Z=Z, lags=lags)


def test_build_coeff_matrix_places_negative_phi_on_lag_diagonals():
    L = build_coeff_matrix([0.5, 0.25], 5)

    assert np.allclose(np.diag(L), 1.0)
    assert np.allclose(np.diag(L, -1), -0.5)
    assert np.allclose(np.diag(L, -2), -0.25)
    assert np.allclose(np.triu(L, 1), 0.0)


def test_build_coeff_matrix_with_explicit_lag_skips_lag_one():
    L = build_coeff_matrix([0.7], 4, lags=(2,))

    assert np.allclose(np.diag(L, -1), 0.0)
    assert np.allclose(np.diag(L, -2), -0.7)


def test_build_coeff_matrix_rejects_wrong_p():
    with pytest.raises(InvalidArgumentError):
        build_coeff_matrix([0.5], 4, p=2)


def test_filters_match_dense_products(rng):
    phi, T = [0.4, 0.3], 9
    L = build_coeff_matrix(phi, T)
    x = rng.standard_normal((T, 3))

    assert np.allclose(apply_coeff(phi, x), L @ x)
    assert np.allclose(apply_coeff_transpose(phi, x), L.T @ x)
    assert np.allclose(solve_coeff(phi, x), np.linalg.solve(L, x))


def test_is_stationary():
    assert is_stationary([0.75, 0.2])
    assert is_stationary([0.95])
    assert not is_stationary([1.0])
    assert not is_stationary([0.5, 0.6])
    assert is_stationary([])


def test_arx_spec_validation():
    Z = make_covariates(6, 2, 1)
    with pytest.raises(InvalidArgumentError):
        ArxSpec(phi=[0.5], beta=[1.0, 2.0], sigma2=0.0, Z=Z)
    with pytest.raises(InvalidArgumentError):
        ArxSpec(phi=[0.5], beta=[1.0], sigma2=1.0, Z=Z)
    bad = Z.copy()
    bad[0, 0] = 2.0
    with pytest.raises(InvalidArgumentError):
        ArxSpec(phi=[0.5], beta=[1.0, 2.0], sigma2=1.0, Z=bad)
    with pytest.raises(InvalidArgumentError):
        ArxSpec(phi=[1.2], beta=[1.0, 2.0], sigma2=1.0, Z=Z, stationary=True)


def test_arx_spec_freezes_its_own_copies_only():
    Z = make_covariates(6, 2, 1)
    beta = np.array([1.0, 2.0])
    spec = ArxSpec(phi=[0.5], beta=beta, sigma2=1.0, Z=Z)

    with pytest.raises(ValueError):
        spec.Z[0, 1] = 3.0
    beta[0] = 5.0
    Z[0, 1] = 3.0
    assert spec.beta[0] == 1.0
    assert spec.Z[0, 1] != 3.0


def test_joint_law_has_unit_determinant_covariance():
    law = joint_law(_spec())

    sign, logdet = np.linalg.slogdet(law.unit_cov)
    assert sign > 0
    assert logdet == pytest.approx(0.0, abs=1e-9)
    assert np.allclose(law.covariance(), 1.5 * law.unit_cov)


def test_log_density_matches_scipy(rng):
    spec = _spec()
    law = joint_law(spec)
    ys = rng.standard_normal((4, spec.T))

    expected = stats.multivariate_normal.logpdf(ys, law.mean, law.covariance())
    assert np.allclose(log_density(ys, law), expected)
    assert log_density(ys[0], law) == pytest.approx(expected[0])


def test_simulate_is_reproducible_and_matches_law():
    spec = _spec(T=6)
    law = joint_law(spec)

    first = simulate(spec, 7, 40_000)
    again = simulate(spec, 7, 40_000)

    assert first.shape == (40_000, 6)
    assert np.array_equal(first, again)
    assert np.allclose(first.mean(axis=0), law.mean, atol=0.05)
    assert np.allclose(np.cov(first, rowvar=False), law.covariance(), atol=0.12)


def test_dgp_from_alpha_scales_base_phi():
    Z = make_covariates(10, 3, 5)
    dgp = dgp_from_alpha(0.5, (0.75, 0.2), (1.0, 0.5, 1.0), 1.0, Z)

    assert np.allclose(dgp.phi, [0.375, 0.1])
    assert np.allclose(dgp_from_alpha(0.0, (0.95,), (1.0, 0.5, 1.0), 1.0, Z).phi, 0.0)
    with pytest.raises(InvalidArgumentError):
        dgp_from_alpha(1.1, (0.95,), (1.0, 0.5, 1.0), 1.0, Z)


@pytest.mark.parametrize(
    "train",
    [
        np.array([0, 1, 2, 3, 4]),  # prefix
        np.array([0, 1, 5, 6, 9, 10]),  # gap in the middle
        np.array([3, 4, 5, 11]),  # late start
        np.arange(12),  # everything
    ],
)
def test_marginal_precision_matches_dense_inverse(train, rng):
    phi, lags, T = [0.6, -0.2], None, 12
    W = joint_law(_spec(T=T, phi=phi)).unit_cov
    W_tt = W[np.ix_(train, train)]
    prec = MarginalPrecision(phi, T, train, lags)
    x = rng.standard_normal((T, 2))

    out = prec.apply(x)

    assert np.allclose(out[train], np.linalg.solve(W_tt, x[train]))
    outside = np.setdiff1d(np.arange(T), train)
    assert np.allclose(out[outside], 0.0)
    assert prec.logdet_cov() == pytest.approx(np.linalg.slogdet(W_tt)[1], abs=1e-9)


def test_marginal_precision_with_lag_two():
    T, train = 10, np.array([0, 2, 3, 7, 8])
    W = joint_law(_spec(T=T, phi=[0.8], lags=(2,))).unit_cov
    prec = MarginalPrecision([0.8], T, train, (2,))
    x = np.arange(T, dtype=float)

    assert np.allclose(prec.apply(x)[train], np.linalg.solve(W[np.ix_(train, train)], x[train]))


def test_make_covariates_has_intercept_and_is_seeded():
    Z = make_covariates(20, 3, 11)

    assert Z.shape == (20, 3)
    assert np.all(Z[:, 0] == 1.0)
    assert np.array_equal(Z, make_covariates(20, 3, 11))
    with pytest.raises(InvalidArgumentError):
        make_covariates(20, 0, 11)


def test_covariates_and_paths_persist_as_csv(tmp_path):
    Z = make_covariates(8, 2, 3)
    path = arx_core.save_covariates(Z, tmp_path / "Z.csv")

    assert np.array_equal(arx_core.load_covariates(path), Z)
    assert path.read_text().splitlines()[0] == "z1,z2"

    paths = simulate(ArxSpec(phi=[0.5], beta=[1.0, 0.0], sigma2=1.0, Z=Z), 1, 3)
    out = arx_core.save_paths(paths, tmp_path / "paths.csv")
    assert out.read_text().splitlines()[0].split(",")[:2] == ["y1", "y2"]
