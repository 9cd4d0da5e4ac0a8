"""Closed forms for the simplified ARX model (fixed phi and sigma2, Gaussian beta).

Every elpd quantity of this model, theoretical or cross-validated, is a
second-degree polynomial ``y'Ay + b'y + c`` in the observed series. This
module builds those polynomials. Fold-level work never forms selection
matrices: training blocks go through ``MarginalPrecision`` and test blocks
are row gathers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import pandas as pd
from scipy import linalg, stats

from arx_core import (
    ArxSpec,
    MarginalPrecision,
    apply_coeff_transpose,
    joint_law,
    solve_coeff,
)
from cv_schemes import FoldPlan, Mode, require_valid, zero_based
from errors import InvalidArgumentError, NumericalFailureError


def _cholesky(matrix: np.ndarray, what: str):
    try:
        return linalg.cho_factor(matrix, lower=True)
    except linalg.LinAlgError as exc:
        raise NumericalFailureError(f"{what} is not positive definite") from exc


def _logdet(chol) -> float:
    return float(2.0 * np.sum(np.log(np.diag(chol[0]))))


@dataclass(frozen=True, eq=False)
class SarxModel:
    """Candidate model: ARX structure with fixed phi/sigma2 and prior beta ~ N(mu0, sigma2 Sigma0)."""

    arx: ArxSpec
    prior_mean: np.ndarray
    prior_cov: np.ndarray

    def __post_init__(self):
        mu0 = np.array(self.prior_mean, dtype=float).reshape(-1)
        sigma0 = np.array(self.prior_cov, dtype=float)
        if mu0.size != self.arx.q or sigma0.shape != (self.arx.q, self.arx.q):
            raise InvalidArgumentError("prior dimensions do not match the model's Z")
        if not np.allclose(sigma0, sigma0.T):
            raise InvalidArgumentError("prior covariance must be symmetric")
        try:
            linalg.cholesky(sigma0, lower=True)
        except linalg.LinAlgError as exc:
            raise InvalidArgumentError("prior covariance must be positive definite") from exc
        object.__setattr__(self, "prior_mean", mu0)
        object.__setattr__(self, "prior_cov", sigma0)

    @property
    def T(self) -> int:
        return self.arx.T

    @property
    def sigma2(self) -> float:
        return self.arx.sigma2

    @property
    def phi(self) -> np.ndarray:
        return self.arx.phi

    @property
    def lags(self) -> tuple[int, ...]:
        return self.arx.lags

    @property
    def Z(self) -> np.ndarray:
        return self.arx.Z

    @cached_property
    def prior_precision(self) -> np.ndarray:
        return linalg.cho_solve(_cholesky(self.prior_cov, "prior covariance"), np.eye(self.arx.q))

    @cached_property
    def design(self) -> np.ndarray:
        """L^-1 Z."""
        return solve_coeff(self.phi, self.Z, self.lags)

    @cached_property
    def factor_inverse(self) -> np.ndarray:
        return solve_coeff(self.phi, np.eye(self.T), self.lags)

    @cached_property
    def unit_cov(self) -> np.ndarray:
        C = self.factor_inverse
        return C @ C.T

    def with_params(self, phi, sigma2: float) -> "SarxModel":
        return SarxModel(self.arx.replace(phi=phi, sigma2=sigma2), self.prior_mean, self.prior_cov)


def make_model(Z, phi, sigma2: float, prior_mean, prior_cov=None, lags=None) -> SarxModel:
    prior_mean = np.asarray(prior_mean, dtype=float)
    if prior_cov is None:
        prior_cov = np.eye(prior_mean.size)
    arx = ArxSpec(phi=phi, beta=prior_mean, sigma2=sigma2, Z=Z, lags=lags)
    return SarxModel(arx, prior_mean, prior_cov)


@dataclass(frozen=True, eq=False)
class BetaPosterior:
    """beta | y ~ N(gain @ y + offset, sigma2 * cov)."""

    cov: np.ndarray
    gain: np.ndarray
    offset: np.ndarray

    def mean(self, y: np.ndarray) -> np.ndarray:
        return self.gain @ np.asarray(y, dtype=float) + self.offset


@dataclass(frozen=True, eq=False)
class PredictiveParams:
    """Predictive mean D y + e and covariance sigma2 * V of a fresh series."""

    D: np.ndarray
    e: np.ndarray
    V: np.ndarray
    sigma2: float


@dataclass(frozen=True, eq=False)
class QuadForm:
    A: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        object.__setattr__(self, "A", (A + A.T) / 2.0)
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float).reshape(-1))
        object.__setattr__(self, "c", float(self.c))

    @property
    def T(self) -> int:
        return self.b.size

    def __call__(self, y):
        return evaluate(self, y)

    def __sub__(self, other: "QuadForm") -> "QuadForm":
        return diff(self, other)


def evaluate(q: QuadForm, y):
    """y'Ay + b'y + c for one series (T,) or a batch (n, T)."""
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        return float(y @ q.A @ y + q.b @ y + q.c)
    return np.einsum("ij,ij->i", y @ q.A, y) + y @ q.b + q.c


def diff(a: QuadForm, b: QuadForm) -> QuadForm:
    if a.T != b.T:
        raise InvalidArgumentError(f"cannot subtract forms of size {a.T} and {b.T}")
    return QuadForm(a.A - b.A, a.b - b.b, a.c - b.c)


def zero_form(T: int) -> QuadForm:
    return QuadForm(np.zeros((T, T)), np.zeros(T), 0.0)


def _train_rows(model: SarxModel, train_indices) -> np.ndarray:
    train = zero_based(train_indices)
    if train.size == 0:
        raise InvalidArgumentError("train set must not be empty")
    if train.min() < 0 or train.max() >= model.T:
        raise InvalidArgumentError("train index out of range")
    return train


def posterior_params(model: SarxModel, train_indices) -> BetaPosterior:
    train = _train_rows(model, train_indices)
    Z, G = model.Z, model.design
    if train.size == model.T:
        # G'W^-1 G = Z'Z and G'W^-1 = Z'L when every point trains
        PG = apply_coeff_transpose(model.phi, Z, model.lags)
        fisher = Z.T @ Z
    else:
        PG = MarginalPrecision(model.phi, model.T, train, model.lags).apply(G)
        fisher = G.T @ PG
    chol = _cholesky(fisher + model.prior_precision, "posterior precision")
    cov = linalg.cho_solve(chol, np.eye(model.arx.q))
    gain = cov @ PG.T
    offset = cov @ (model.prior_precision @ model.prior_mean)
    return BetaPosterior(cov=cov, gain=gain, offset=offset)


def predictive_params(model: SarxModel, train_indices) -> PredictiveParams:
    post = posterior_params(model, train_indices)
    G = model.design
    V = model.unit_cov + G @ post.cov @ G.T
    return PredictiveParams(D=G @ post.gain, e=G @ post.offset, V=(V + V.T) / 2.0, sigma2=model.sigma2)


def _test_block(model: SarxModel, post: BetaPosterior, test: np.ndarray, pointwise: bool):
    """Rows of D and e and the block of V belonging to ``test``."""
    G_test = model.design[test]
    C_test = model.factor_inverse[test]
    V_test = C_test @ C_test.T + G_test @ post.cov @ G_test.T
    V_test = (V_test + V_test.T) / 2.0
    if pointwise:
        V_test = np.diag(np.diag(V_test))
    return G_test @ post.gain, G_test @ post.offset, V_test


def _check_sizes(model: SarxModel, dgp: ArxSpec):
    if dgp.T != model.T:
        raise InvalidArgumentError(f"model has T={model.T} but DGP has T={dgp.T}")


def _expected_score_form(model, dgp, test_indices, train_indices, pointwise) -> QuadForm:
    _check_sizes(model, dgp)
    test = zero_based(test_indices)
    if test.size == 0:
        raise InvalidArgumentError("test set must not be empty")
    post = posterior_params(model, train_indices)
    D_t, e_t, V_t = _test_block(model, post, test, pointwise)
    law = joint_law(dgp)
    s2 = model.sigma2
    chol = _cholesky(V_t, "predictive covariance")
    offset = e_t - law.mean[test]
    solved_D = linalg.cho_solve(chol, D_t)
    solved_offset = linalg.cho_solve(chol, offset)
    true_block = law.unit_cov[np.ix_(test, test)]
    A = -(D_t.T @ solved_D) / (2.0 * s2)
    b = -(D_t.T @ solved_offset) / s2
    c = (
        -0.5 * (test.size * np.log(2.0 * np.pi * s2) + _logdet(chol))
        - law.sigma2 / (2.0 * s2) * np.trace(linalg.cho_solve(chol, true_block))
        - offset @ solved_offset / (2.0 * s2)
    )
    return QuadForm(A, b, c)


def eljpd_quadform(model: SarxModel, dgp: ArxSpec, test_indices, train_indices) -> QuadForm:
    """Expected log joint predictive density of a fresh test block, as a polynomial in y."""
    return _expected_score_form(model, dgp, test_indices, train_indices, pointwise=False)


def elppd_quadform(model: SarxModel, dgp: ArxSpec, test_indices, train_indices) -> QuadForm:
    """Pointwise counterpart of ``eljpd_quadform`` (diagonal predictive covariance)."""
    return _expected_score_form(model, dgp, test_indices, train_indices, pointwise=True)


def cv_quadform(model: SarxModel, plan: FoldPlan) -> QuadForm:
    """CV estimator on sum scale: sum_k T/(K |test_k|) log p(y_test_k | y_train_k)."""
    require_valid(plan)
    if plan.T != model.T:
        raise InvalidArgumentError(f"plan has T={plan.T} but model has T={model.T}")
    T, K, s2 = model.T, plan.K, model.sigma2
    pointwise = plan.mode == Mode.POINTWISE
    whitened, b, c = [], np.zeros(T), 0.0
    for fold in plan.folds:
        test = zero_based(fold.test)
        post = posterior_params(model, fold.train)
        D_t, e_t, V_t = _test_block(model, post, test, pointwise)
        chol = _cholesky(V_t, "fold predictive covariance")
        weight = T / (K * test.size)
        resid = -D_t
        resid[np.arange(test.size), test] += 1.0
        scale = np.sqrt(weight / s2)
        R_w = linalg.solve_triangular(chol[0], resid, lower=True) * scale
        e_w = linalg.solve_triangular(chol[0], e_t, lower=True) * scale
        whitened.append(R_w)
        b += R_w.T @ e_w
        c += -0.5 * weight * (test.size * np.log(2.0 * np.pi * s2) + _logdet(chol)) - 0.5 * e_w @ e_w
    stacked = np.vstack(whitened)
    return QuadForm(-0.5 * (stacked.T @ stacked), b, c)


def gaussian_cross_entropy(mean_p, cov_p, mean_q, cov_q) -> float:
    """E_p[log q] for multivariate normals p and q."""
    chol = _cholesky(np.atleast_2d(cov_q), "covariance")
    gap = np.atleast_1d(mean_q - mean_p)
    k = gap.size
    return float(
        -0.5
        * (
            k * np.log(2.0 * np.pi)
            + _logdet(chol)
            + np.trace(linalg.cho_solve(chol, np.atleast_2d(cov_p)))
            + gap @ linalg.cho_solve(chol, gap)
        )
    )


def eljpd_value(model, dgp, y, test_indices, train_indices, pointwise: bool = False) -> float:
    """Direct cross-entropy evaluation of the expected log predictive density for one y."""
    _check_sizes(model, dgp)
    test = zero_based(test_indices)
    pred = predictive_params(model, train_indices)
    law = joint_law(dgp)
    mean_q = pred.D[test] @ np.asarray(y, dtype=float) + pred.e[test]
    cov_q = model.sigma2 * pred.V[np.ix_(test, test)]
    cov_p = law.covariance()[np.ix_(test, test)]
    if not pointwise:
        return gaussian_cross_entropy(law.mean[test], cov_p, mean_q, cov_q)
    return sum(
        gaussian_cross_entropy(law.mean[t : t + 1], cov_p[i : i + 1, i : i + 1], mean_q[i : i + 1], cov_q[i : i + 1, i : i + 1])
        for i, t in enumerate(test)
    )


def log_predictive_density(model, y, test_indices, train_indices, pointwise: bool = False) -> float:
    """log p(y_test | y_train) under the model, evaluated from dense predictive params."""
    y = np.asarray(y, dtype=float)
    test = zero_based(test_indices)
    pred = predictive_params(model, train_indices)
    mean = pred.D[test] @ y + pred.e[test]
    cov = model.sigma2 * pred.V[np.ix_(test, test)]
    if pointwise:
        return float(np.sum(stats.norm.logpdf(y[test], mean, np.sqrt(np.diag(cov)))))
    return float(stats.multivariate_normal.logpdf(y[test], mean, cov))


def cv_value(model: SarxModel, y, plan: FoldPlan) -> float:
    """Fold-by-fold CV estimate on sum scale for one observed series."""
    pointwise = plan.mode == Mode.POINTWISE
    return sum(
        plan.T / (plan.K * len(fold.test))
        * log_predictive_density(model, y, fold.test, fold.train, pointwise)
        for fold in plan.folds
    )


def full_indices(T: int) -> tuple[int, ...]:
    return tuple(range(1, T + 1))


def quadform_to_frame(q: QuadForm) -> pd.DataFrame:
    """Long layout: A row-major, then b, then c."""
    T = q.T
    rows, cols = np.divmod(np.arange(T * T), T)
    parts = [
        pd.DataFrame({"term": "A", "row": rows + 1, "col": cols + 1, "value": q.A.reshape(-1)}),
        pd.DataFrame({"term": "b", "row": np.arange(1, T + 1), "col": 0, "value": q.b}),
        pd.DataFrame({"term": ["c"], "row": [0], "col": [0], "value": [q.c]}),
    ]
    return pd.concat(parts, ignore_index=True)
