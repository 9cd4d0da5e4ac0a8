"""Oracle plug-in values for the simplified candidate models.

The oracle picks the (phi, sigma2) that minimize the expected KL divergence
from the data-generating process to the candidate's full-data predictive.
Stationarity is enforced by optimizing over tanh-mapped partial
autocorrelations, and sigma2 over its logarithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg, optimize

from arx_core import ArxSpec, apply_coeff, joint_law, solve_coeff
from errors import InvalidArgumentError, NumericalFailureError
from gchisq import moments
from sarx_analytic import SarxModel, eljpd_quadform, full_indices
from settings import (
    ORACLE_FATOL,
    ORACLE_MAXITER,
    ORACLE_SIMPLEX_SCALE,
    ORACLE_XATOL,
    app_logger,
)

START_OFFSETS = (0.0, 0.5, -0.5)


@dataclass(frozen=True, eq=False)
class OracleResult:
    phi_hat: np.ndarray
    sigma2_hat: float
    objective: float
    converged: bool
    iterations: int

    def as_row(self, prefix: str = "") -> dict:
        row = {f"{prefix}phi_hat_{j + 1}": float(v) for j, v in enumerate(self.phi_hat)}
        row.update(
            {
                f"{prefix}sigma2_hat": self.sigma2_hat,
                f"{prefix}objective": self.objective,
                f"{prefix}converged": self.converged,
            }
        )
        return row


def pacf_to_phi(pacf) -> np.ndarray:
    """Durbin-Levinson recursion from partial autocorrelations to AR coefficients."""
    phi = np.zeros(0)
    for a in np.asarray(pacf, dtype=float):
        phi = np.r_[phi - a * phi[::-1], a]
    return phi


def phi_to_pacf(phi) -> np.ndarray:
    phi = np.array(phi, dtype=float)
    pacf = np.zeros(phi.size)
    for k in range(phi.size, 0, -1):
        a = phi[k - 1]
        pacf[k - 1] = a
        prev = phi[: k - 1]
        phi = (prev + a * prev[::-1]) / (1.0 - a * a)
    return pacf


def _reparameterizable(lags: tuple[int, ...]) -> str:
    if lags == tuple(range(1, len(lags) + 1)):
        return "pacf"
    if len(lags) == 1:
        return "single"
    raise InvalidArgumentError(f"no stationarity reparameterization for lags {lags}")


def unconstrained_to_phi(u, lags: tuple[int, ...]) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    _reparameterizable(lags)
    # a single lag k is stationary iff |phi| < 1, which is also the lag-1 pacf map
    return pacf_to_phi(np.tanh(u))


def phi_to_unconstrained(phi, lags: tuple[int, ...]) -> np.ndarray:
    _reparameterizable(lags)
    pacf = phi_to_pacf(phi)
    if np.any(np.abs(pacf) >= 1.0):
        raise InvalidArgumentError(f"phi={np.asarray(phi).tolist()} is outside the stationarity region")
    return np.arctanh(pacf)


class _TruthCache:
    """Quantities of the DGP reused by every objective evaluation."""

    def __init__(self, dgp: ArxSpec):
        self.dgp = dgp
        self.factor_inverse = solve_coeff(dgp.phi, np.eye(dgp.T), dgp.lags)
        self.mean = self.factor_inverse @ (dgp.Z @ dgp.beta)
        self.sigma2 = dgp.sigma2
        # log|sigma*^2 V*| with |V*| = 1
        self.logdet = dgp.T * np.log(dgp.sigma2)


def expected_kl(model: SarxModel, dgp: ArxSpec, truth: _TruthCache | None = None) -> float:
    """E_y KL(p_true || p(. | y)) for the full-data predictive of ``model``.

    Uses V^-1 = L'L - L'Z M Z'L with M = (Sigma_beta^-1 + Z'Z)^-1 and
    |V| = |I + Sigma_beta Z'Z| so nothing of size T x T is inverted.
    """
    if dgp.T != model.T:
        raise InvalidArgumentError(f"model has T={model.T} but DGP has T={dgp.T}")
    truth = truth or _TruthCache(dgp)
    T, s2 = model.T, model.sigma2
    phi, lags, Z = model.phi, model.lags, model.Z
    q = Z.shape[1]
    ZtZ = Z.T @ Z
    try:
        post_prec = ZtZ + model.prior_precision
        post_cov = linalg.cho_solve(linalg.cho_factor(post_prec, lower=True), np.eye(q))
        M = linalg.cho_solve(linalg.cho_factor(post_prec + ZtZ, lower=True), np.eye(q))
    except linalg.LinAlgError as exc:
        raise NumericalFailureError("predictive covariance is not positive definite") from exc
    sign, logdet_V = np.linalg.slogdet(np.eye(q) + post_cov @ ZtZ)
    if sign <= 0:
        raise NumericalFailureError("predictive covariance is not positive definite")

    def vinv_quad(X, Y):
        LX, LY = apply_coeff(phi, X, lags), apply_coeff(phi, Y, lags)
        ZLX, ZLY = Z.T @ LX, Z.T @ LY
        return LX.T @ LY - ZLX.T @ M @ ZLY

    # tr(V^-1 V*) with V* = C* C*'
    LC = apply_coeff(phi, truth.factor_inverse, lags)
    ZLC = Z.T @ LC
    trace_true = np.sum(LC * LC) - np.sum(ZLC * (M @ ZLC))
    # tr(V^-1 D V* D') with D = G Sigma_beta Z'L and G = L^-1 Z
    G = solve_coeff(phi, Z, lags)
    spread = post_cov @ (ZLC @ ZLC.T) @ post_cov
    trace_learn = np.sum(spread * vinv_quad(G, G))
    # mean offset (D - I) m* + e
    e = G @ (post_cov @ (model.prior_precision @ model.prior_mean))
    Lm = apply_coeff(phi, truth.mean, lags)
    gap = G @ (post_cov @ (Z.T @ Lm)) - truth.mean + e
    offset = float(vinv_quad(gap, gap))
    return float(
        0.5 * (T * np.log(s2) + logdet_V - truth.logdet - T)
        + truth.sigma2 / (2.0 * s2) * (trace_true + trace_learn)
        + offset / (2.0 * s2)
    )


def expected_eljpd(model: SarxModel, dgp: ArxSpec) -> float:
    """E_y[eljpd] of the full-data predictive via the exact moments of its quadratic form."""
    everything = full_indices(model.T)
    q = eljpd_quadform(model, dgp, everything, everything)
    return moments(q, joint_law(dgp))[0]


def fit_oracle(model: SarxModel, dgp: ArxSpec, objective: str = "kl") -> OracleResult:
    """Nelder-Mead over (unconstrained phi, log sigma2) from fixed starts; best run wins."""
    if objective not in ("kl", "elpd"):
        raise InvalidArgumentError(f"unknown oracle objective {objective!r}")
    p, lags = model.arx.p, model.lags
    if p > 2:
        raise InvalidArgumentError("oracle fits support at most two AR lags")
    if p:
        _reparameterizable(lags)
    truth = _TruthCache(dgp)

    def loss(x: np.ndarray) -> float:
        try:
            candidate = model.with_params(unconstrained_to_phi(x[:p], lags), float(np.exp(x[p])))
            if objective == "kl":
                return expected_kl(candidate, dgp, truth)
            return -expected_eljpd(candidate, dgp)
        except (NumericalFailureError, InvalidArgumentError, FloatingPointError):
            return np.inf

    best = None
    total_iterations = 0
    for offset in START_OFFSETS:
        x0 = np.r_[np.full(p, offset), np.log(dgp.sigma2)]
        simplex = np.vstack([x0, x0 + ORACLE_SIMPLEX_SCALE * np.eye(p + 1)])
        res = optimize.minimize(
            loss,
            x0,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "fatol": ORACLE_FATOL,
                "xatol": ORACLE_XATOL,
                "maxiter": ORACLE_MAXITER,
                "maxfev": 2 * ORACLE_MAXITER,
            },
        )
        total_iterations += int(res.nit)
        if best is None or res.fun < best.fun:
            best = res
    if not best.success:
        app_logger.warning(f"oracle fit did not converge: {best.message}")
    return OracleResult(
        phi_hat=unconstrained_to_phi(best.x[:p], lags),
        sigma2_hat=float(np.exp(best.x[p])),
        objective=float(best.fun) if objective == "kl" else float(-best.fun),
        converged=bool(best.success),
        iterations=total_iterations,
    )


def oracle_model(model: SarxModel, dgp: ArxSpec) -> tuple[SarxModel, OracleResult]:
    result = fit_oracle(model, dgp)
    return model.with_params(result.phi_hat, result.sigma2_hat), result
