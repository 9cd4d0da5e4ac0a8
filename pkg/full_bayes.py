"""Fully Bayesian ARX(1,q): unknown beta, sigma2 and a single AR coefficient.

Given phi the model is conjugate: beta | sigma2 ~ N(mu0, sigma2 Sigma0) and
sigma2 ~ IG(a0, b0), so y[train] | phi has a closed-form NIG marginal.
Everything that depends on phi is integrated over its scaled Beta(c0, d0)
prior on (-1, 1) with one-dimensional adaptive quadrature; posterior draws
use exact composition sampling.

CV predictives score the test values as a fresh replicate series that
shares (beta, sigma2, phi) with the training data, the same predictive the
fixed-parameter closed forms use. The same-series conditional density is
available as ``PredictiveForm.CONDITIONAL``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
import pandas as pd
from scipy import integrate, linalg, optimize, special, stats

from arx_core import ArxSpec, MarginalPrecision, apply_coeff, simulate, solve_coeff
from cv_schemes import FoldPlan, Mode, SchemeSpec, make_plan, zero_based
from errors import InvalidArgumentError, NumericalFailureError
from settings import (
    PHI_GRID_EDGE,
    PHI_GRID_NODES,
    PHI_GRID_REFINE_MASS,
    PHI_GRID_REFINE_NODES,
    app_logger,
)

_HESSIAN_STEP = 1e-4
_LAPLACE_SPAN = 8.0


class PredictiveForm(str, Enum):
    """How test values relate to the training series.

    REPLICATE: an independent draw of the series; only the parameters are
    shared with the training data. CONDITIONAL: the unobserved part of the
    same series, so log p(train) + log p(test | train) = log p(train, test).
    """

    REPLICATE = "replicate"
    CONDITIONAL = "conditional"


@dataclass(frozen=True, eq=False)
class FullPrior:
    mu0: np.ndarray
    Sigma0: np.ndarray
    a0: float = 1.0
    b0: float = 1.0
    c0: float = 1.0
    d0: float = 1.0

    def __post_init__(self):
        mu0 = np.atleast_1d(np.array(self.mu0, dtype=float))
        Sigma0 = np.atleast_2d(np.array(self.Sigma0, dtype=float))
        if Sigma0.shape != (mu0.size, mu0.size):
            raise InvalidArgumentError("Sigma0 must be q x q")
        if min(self.a0, self.b0, self.c0, self.d0) <= 0:
            raise InvalidArgumentError("a0, b0, c0 and d0 must be positive")
        try:
            chol = linalg.cho_factor(Sigma0, lower=True)
        except linalg.LinAlgError as exc:
            raise InvalidArgumentError("Sigma0 must be positive definite") from exc
        object.__setattr__(self, "mu0", mu0)
        object.__setattr__(self, "Sigma0", Sigma0)
        object.__setattr__(self, "precision", linalg.cho_solve(chol, np.eye(mu0.size)))
        object.__setattr__(self, "logdet_precision", -2.0 * float(np.sum(np.log(np.diag(chol[0])))))

    @property
    def q(self) -> int:
        return self.mu0.size

    def log_prior_phi(self, phi: float) -> float:
        return float(stats.beta.logpdf((phi + 1.0) / 2.0, self.c0, self.d0) - np.log(2.0))


@dataclass(frozen=True, eq=False)
class PhiGrid:
    nodes: np.ndarray
    log_weights: np.ndarray
    laplace: tuple[float, float]

    def cdf(self) -> np.ndarray:
        density = np.exp(self.log_weights - self.log_weights.max())
        cumulative = integrate.cumulative_trapezoid(density, self.nodes, initial=0.0)
        return cumulative / cumulative[-1]


@dataclass(frozen=True, eq=False)
class MarginalResult:
    value: float
    laplace: float
    error: float
    grid: PhiGrid | None = None


@dataclass(frozen=True, eq=False)
class PosteriorDraws:
    phi: np.ndarray
    sigma2: np.ndarray
    beta: np.ndarray
    lag: int = 1


@dataclass(frozen=True, eq=False)
class _PhiStats:
    loglik: float
    a_n: float
    b_n: float
    mu_n: np.ndarray
    chol_n: np.ndarray


def nig_logpdf(x, mu, Sigma, a: float, b: float) -> float:
    """Log density of x under the NIG law with sigma2 integrated out (a multivariate t)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    gap = x - np.atleast_1d(np.asarray(mu, dtype=float))
    p = x.size
    chol = linalg.cho_factor(np.atleast_2d(Sigma), lower=True)
    logdet = 2.0 * np.sum(np.log(np.diag(chol[0])))
    quad = gap @ linalg.cho_solve(chol, gap)
    return float(
        special.gammaln((p + 2.0 * a) / 2.0)
        + a * np.log(b)
        - special.gammaln(a)
        - 0.5 * p * np.log(2.0 * np.pi)
        - 0.5 * logdet
        - 0.5 * (p + 2.0 * a) * np.log(b + 0.5 * quad)
    )


def _check_inputs(y, Z, prior: FullPrior, lag: int) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y, dtype=float).reshape(-1)
    Z = np.asarray(Z, dtype=float)
    if Z.shape != (y.size, prior.q):
        raise InvalidArgumentError(f"Z must be {y.size} x {prior.q}, got {Z.shape}")
    if lag < 1:
        raise InvalidArgumentError("full-Bayes models need one AR lag")
    return y, Z


def _block_gram(phi: float, X: np.ndarray, block: np.ndarray, lag: int) -> tuple[np.ndarray, float]:
    """X[block]' W[block, block]^-1 X[block] and log|W[block, block]|."""
    T = X.shape[0]
    if 2 * block.size > T:
        precision = MarginalPrecision([phi], T, block, (lag,))
        return X.T @ precision.apply(X), precision.logdet_cov()
    # small blocks: factor the covariance of the block directly
    rows = solve_coeff([phi], np.eye(T), (lag,))[block]
    try:
        chol = linalg.cho_factor(rows @ rows.T, lower=True)
    except linalg.LinAlgError as exc:
        raise NumericalFailureError(f"block covariance singular at phi={phi}") from exc
    X_block = X[block]
    return X_block.T @ linalg.cho_solve(chol, X_block), float(2.0 * np.sum(np.log(np.diag(chol[0]))))


def _phi_stats(phi: float, y: np.ndarray, blocks: tuple[np.ndarray, ...], prior: FullPrior,
               Z: np.ndarray, lag: int) -> _PhiStats:
    """NIG statistics of y over index blocks with independent noise and shared (beta, sigma2)."""
    X = np.column_stack([y, solve_coeff([phi], Z, (lag,))])
    gram = np.zeros((X.shape[1], X.shape[1]))
    logdet_cov, n = 0.0, 0
    for block in blocks:
        if block.size:
            block_gram, block_logdet = _block_gram(phi, X, block, lag)
            gram += block_gram
            logdet_cov += block_logdet
            n += block.size
    lam = gram[1:, 1:] + prior.precision
    try:
        chol = linalg.cholesky(lam, lower=True)
    except linalg.LinAlgError as exc:
        raise NumericalFailureError(f"posterior precision singular at phi={phi}") from exc
    rhs = gram[1:, 0] + prior.precision @ prior.mu0
    mu_n = linalg.cho_solve((chol, True), rhs)
    a_n = prior.a0 + 0.5 * n
    b_n = prior.b0 + 0.5 * (gram[0, 0] + prior.mu0 @ prior.precision @ prior.mu0 - mu_n @ rhs)
    loglik = (
        -0.5 * n * np.log(2.0 * np.pi)
        - 0.5 * logdet_cov
        + 0.5 * prior.logdet_precision
        - float(np.sum(np.log(np.diag(chol))))
        + prior.a0 * np.log(prior.b0)
        - a_n * np.log(b_n)
        + special.gammaln(a_n)
        - special.gammaln(prior.a0)
    )
    return _PhiStats(float(loglik), a_n, float(b_n), mu_n, chol)


class _LogJoint:
    """log p(y[blocks] | phi) + log p(phi), with memoization."""

    def __init__(self, y, blocks, prior, Z, lag):
        self.args = (y, blocks, prior, Z, lag)
        self.prior = prior
        self.cache: dict[float, float] = {}

    def __call__(self, phi: float) -> float:
        phi = float(phi)
        if phi not in self.cache:
            self.cache[phi] = _phi_stats(phi, *self.args).loglik + self.prior.log_prior_phi(phi)
        return self.cache[phi]


def _laplace(f: _LogJoint) -> tuple[float, float, float]:
    """Mode, curvature and Laplace estimate of log int exp(f)."""
    edge = 1.0 - PHI_GRID_EDGE
    res = optimize.minimize_scalar(lambda x: -f(x), bounds=(-edge, edge), method="bounded",
                                   options={"xatol": 1e-10})
    mode = float(res.x)
    h = min(_HESSIAN_STEP, 0.5 * (edge - abs(mode))) or _HESSIAN_STEP
    curvature = -(f(mode + h) - 2.0 * f(mode) + f(mode - h)) / h**2
    if not curvature > 0:
        app_logger.warning(f"log posterior of phi is flat or convex at its mode {mode:.4f}")
        curvature = 1.0
    estimate = f(mode) + 0.5 * np.log(2.0 * np.pi / curvature)
    return mode, float(curvature), float(estimate)


def _integrate(f: _LogJoint, mode: float, curvature: float) -> tuple[float, float]:
    peak = f(mode)
    span = _LAPLACE_SPAN / np.sqrt(curvature)
    points = sorted({float(np.clip(x, -1 + 1e-12, 1 - 1e-12)) for x in (mode - span, mode, mode + span)})
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            # scaled by the reciprocal of the peak value
            area, err = integrate.quad(lambda x: np.exp(f(x) - peak), -1.0, 1.0, points=points,
                                       epsabs=1e-14, epsrel=1e-11, limit=200)
        except integrate.IntegrationWarning as exc:
            raise NumericalFailureError(f"phi quadrature failed: {exc}", diagnostics={"mode": mode}) from exc
    if not area > 0:
        raise NumericalFailureError("phi quadrature returned a non-positive mass", estimate=area)
    return float(peak + np.log(area)), float(err / area)


def _grid(f: _LogJoint, mode: float, curvature: float) -> PhiGrid:
    n, edge = PHI_GRID_NODES, 1.0 - PHI_GRID_EDGE
    nodes = -np.cos(np.pi * (2 * np.arange(n) + 1) / (2 * n)) * edge
    log_w = np.array([f(x) for x in nodes])
    widths = np.gradient(nodes)
    mass = np.exp(log_w - log_w.max()) * widths
    if mass.max() / mass.sum() > PHI_GRID_REFINE_MASS:
        span = _LAPLACE_SPAN / np.sqrt(curvature)
        extra = np.linspace(max(mode - span, -edge), min(mode + span, edge), PHI_GRID_REFINE_NODES)
        nodes = np.unique(np.r_[nodes, extra])
        log_w = np.array([f(x) for x in nodes])
    return PhiGrid(nodes=nodes, log_weights=log_w, laplace=(mode, curvature))


def _train_block(train_indices) -> tuple[np.ndarray, ...]:
    return (np.sort(zero_based(train_indices)),)


def laplace_log_marginal(y, train_indices, prior: FullPrior, Z, lag: int = 1) -> float:
    y, Z = _check_inputs(y, Z, prior, lag)
    return _laplace(_LogJoint(y, _train_block(train_indices), prior, Z, lag))[2]


def log_marginal(y, train_indices, prior: FullPrior, Z, lag: int = 1, with_grid: bool = True) -> MarginalResult:
    """log p(y[train]) with phi integrated out, plus the Laplace estimate and a PhiGrid."""
    y, Z = _check_inputs(y, Z, prior, lag)
    f = _LogJoint(y, _train_block(train_indices), prior, Z, lag)
    mode, curvature, laplace = _laplace(f)
    value, error = _integrate(f, mode, curvature)
    grid = _grid(f, mode, curvature) if with_grid else None
    return MarginalResult(value=value, laplace=laplace, error=error, grid=grid)


class _Evidence:
    """Phi-integrated log p(y[blocks]) for one filled series, memoized per block layout."""

    def __init__(self, y: np.ndarray, prior: FullPrior, Z: np.ndarray, lag: int, laplace_only: bool = False):
        self.y, self.prior, self.Z, self.lag = y, prior, Z, lag
        self.laplace_only = laplace_only
        self.cache: dict[tuple[bytes, ...], float] = {}

    def __call__(self, blocks: tuple[np.ndarray, ...]) -> float:
        key = tuple(block.tobytes() for block in blocks)
        if key not in self.cache:
            f = _LogJoint(self.y, blocks, self.prior, self.Z, self.lag)
            mode, curvature, laplace = _laplace(f)
            self.cache[key] = laplace if self.laplace_only else _integrate(f, mode, curvature)[0]
        return self.cache[key]


def _split(train: np.ndarray, test: np.ndarray, form: PredictiveForm) -> tuple[np.ndarray, ...]:
    if form == PredictiveForm.CONDITIONAL:
        return (np.union1d(train, test),)
    return (train, np.sort(test))


def _fill(y_test_values, test_indices, y, train_indices) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    test, train = zero_based(test_indices), np.sort(zero_based(train_indices))
    if np.intersect1d(test, train).size:
        raise InvalidArgumentError("test and train indices overlap")
    filled = np.array(y, dtype=float).reshape(-1)
    filled[test] = np.asarray(y_test_values, dtype=float)
    return filled, np.sort(test), train


def _predictive(evidence: _Evidence, test: np.ndarray, train: np.ndarray, mode, form) -> float:
    form = PredictiveForm(form)
    base = evidence((train,))
    if Mode(mode) == Mode.JOINT:
        return evidence(_split(train, test, form)) - base
    return float(sum(evidence(_split(train, test[i:i + 1], form)) - base for i in range(test.size)))


def log_predictive(y_test_values, test_indices, y, train_indices, prior: FullPrior, Z,
                   mode: Mode | str = Mode.JOINT, lag: int = 1,
                   form: PredictiveForm | str = PredictiveForm.REPLICATE) -> float:
    """log p(y_test | y_train) as a ratio of phi-integrated marginals."""
    filled, test, train = _fill(y_test_values, test_indices, y, train_indices)
    filled, Z = _check_inputs(filled, Z, prior, lag)
    return _predictive(_Evidence(filled, prior, Z, lag), test, train, mode, form)


def log_predictive_laplace(y_test_values, test_indices, y, train_indices, prior: FullPrior, Z,
                           mode: Mode | str = Mode.JOINT, lag: int = 1,
                           form: PredictiveForm | str = PredictiveForm.REPLICATE) -> float:
    filled, test, train = _fill(y_test_values, test_indices, y, train_indices)
    filled, Z = _check_inputs(filled, Z, prior, lag)
    return _predictive(_Evidence(filled, prior, Z, lag, laplace_only=True), test, train, mode, form)


def posterior_draws(n: int, y, train_indices, prior: FullPrior, Z, seed, lag: int = 1) -> PosteriorDraws:
    """phi from the gridded marginal, then sigma2 | phi and beta | sigma2, phi exactly."""
    y, Z = _check_inputs(y, Z, prior, lag)
    blocks = _train_block(train_indices)
    f = _LogJoint(y, blocks, prior, Z, lag)
    grid = _grid(f, *_laplace(f)[:2])
    rng = np.random.default_rng(seed)
    phis = np.interp(rng.random(n), grid.cdf(), grid.nodes)
    sigma2 = np.empty(n)
    beta = np.empty((n, prior.q))
    for i, phi in enumerate(phis):
        s = _phi_stats(phi, y, blocks, prior, Z, lag)
        sigma2[i] = stats.invgamma.rvs(s.a_n, scale=s.b_n, random_state=rng)
        z = rng.standard_normal(prior.q)
        beta[i] = s.mu_n + np.sqrt(sigma2[i]) * linalg.solve_triangular(s.chol_n.T, z, lower=False)
    return PosteriorDraws(phi=phis, sigma2=sigma2, beta=beta, lag=lag)


def elpd_mc(draws: PosteriorDraws, dgp: ArxSpec, S: int, mode: Mode | str, seed, Z) -> tuple[float, float]:
    """Monte Carlo elpd: mean over fresh series of log mean_theta p(y_new | theta), with its SE."""
    Z = np.asarray(Z, dtype=float)
    ys = simulate(dgp, seed, S)
    T, lag = dgp.T, draws.lag
    pointwise = Mode(mode) == Mode.POINTWISE
    acc = np.full((S, T) if pointwise else S, -np.inf)
    impulse = np.zeros(T)
    impulse[0] = 1.0
    for phi, s2, beta in zip(draws.phi, draws.sigma2, draws.beta):
        if pointwise:
            mean = solve_coeff([phi], Z @ beta, (lag,))
            var = s2 * np.cumsum(solve_coeff([phi], impulse, (lag,)) ** 2)
            logp = stats.norm.logpdf(ys, mean, np.sqrt(var))
        else:
            resid = apply_coeff([phi], ys.T, (lag,)) - (Z @ beta)[:, None]
            logp = -0.5 * T * np.log(2.0 * np.pi * s2) - 0.5 * np.sum(resid**2, axis=0) / s2
        acc = np.logaddexp(acc, logp)
    per_series = acc - np.log(draws.phi.size)
    if pointwise:
        per_series = per_series.sum(axis=1)
    se = float(np.std(per_series, ddof=1) / np.sqrt(S)) if S > 1 else 0.0
    return float(np.mean(per_series)), se


def cv_statistic(y, plan: FoldPlan, prior: FullPrior, Z, lag: int = 1) -> float:
    """Sum-scale CV estimate with weights T / (K |test_k|)."""
    y, Z = _check_inputs(y, Z, prior, lag)
    return _cv_statistic(_Evidence(y, prior, Z, lag), plan)


def _cv_statistic(evidence: _Evidence, plan: FoldPlan) -> float:
    total = 0.0
    for fold in plan.folds:
        _, test, train = _fill(evidence.y[zero_based(fold.test)], fold.test, evidence.y, fold.train)
        total += plan.T / (plan.K * len(fold.test)) * _predictive(evidence, test, train, plan.mode,
                                                                 PredictiveForm.REPLICATE)
    return total


@dataclass(frozen=True, eq=False)
class FullCandidate:
    """A full-Bayes candidate: its covariate columns, prior and AR lag."""

    Z: np.ndarray
    prior: FullPrior
    lag: int = 1


def theoretical_elpd(y, candidate: FullCandidate, dgp: ArxSpec, n_draws: int, S: int, seed) -> dict:
    """Joint and pointwise elpd of the full-data posterior predictive."""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    seeds = seed.spawn(3)
    draws = posterior_draws(n_draws, y, np.arange(1, dgp.T + 1), candidate.prior, candidate.Z, seeds[0], candidate.lag)
    joint, joint_se = elpd_mc(draws, dgp, S, Mode.JOINT, seeds[1], candidate.Z)
    pointwise, pointwise_se = elpd_mc(draws, dgp, S, Mode.POINTWISE, seeds[2], candidate.Z)
    return {"joint": joint, "joint_se": joint_se, "pointwise": pointwise, "pointwise_se": pointwise_se}


def replicate_row(index: int, dgp: ArxSpec, model_a: FullCandidate, model_b: FullCandidate,
                  scheme: SchemeSpec, seed: int, include_elpd: bool = False,
                  n_draws: int = 1000, S: int = 1000,
                  modes: tuple[Mode, ...] = (Mode.JOINT, Mode.POINTWISE)) -> dict:
    """One replicate of the CV-versus-truth comparison; seeds derive from ``index`` only."""
    child = np.random.SeedSequence(seed, spawn_key=(index,))
    data_seed, elpd_a_seed, elpd_b_seed = child.spawn(3)
    y = simulate(dgp, data_seed, 1)[0]
    row: dict = {"replicate": index, "stat_joint": np.nan, "stat_pointwise": np.nan}
    # one evidence cache per candidate, shared by the joint and pointwise plans
    evidence_a, evidence_b = (_Evidence(y, m.prior, _check_inputs(y, m.Z, m.prior, m.lag)[1], m.lag)
                              for m in (model_a, model_b))
    for mode in modes:
        plan = make_plan(scheme.with_mode(mode), dgp.T)
        row[f"stat_{mode.value}"] = _cv_statistic(evidence_a, plan) - _cv_statistic(evidence_b, plan)
    if include_elpd:
        elpd_a = theoretical_elpd(y, model_a, dgp, n_draws, S, elpd_a_seed)
        elpd_b = theoretical_elpd(y, model_b, dgp, n_draws, S, elpd_b_seed)
        row["elpd_joint_true"] = elpd_a["joint"] - elpd_b["joint"]
        row["elpd_pointwise_true"] = elpd_a["pointwise"] - elpd_b["pointwise"]
    else:
        row["elpd_joint_true"] = np.nan
        row["elpd_pointwise_true"] = np.nan
    return row


def replicate_study(dgp: ArxSpec, model_a: FullCandidate, model_b: FullCandidate, scheme: SchemeSpec,
                    n_reps: int, seed: int, include_elpd: bool = False, **kwargs) -> pd.DataFrame:
    rows = [replicate_row(i, dgp, model_a, model_b, scheme, seed, include_elpd, **kwargs) for i in range(n_reps)]
    return pd.DataFrame(rows)
