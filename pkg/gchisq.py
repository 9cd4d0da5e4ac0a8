"""Generalized chi-squared laws of quadratic forms in an ARX series.

omega = mu + sigma * N(0,1) + sum_j lambda_j * chi2(r_j, delta2_j)

The CDF is computed by Gil-Pelaez inversion of the characteristic function
with the real Imhof integrand. The integral is split at ``t0``: the finite
piece uses QUADPACK's oscillatory rule (QAWO) and the tail uses its Fourier
rule (QAWF). Any failure to reach the error target falls back to simulation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import integrate, linalg, optimize, special, stats

from arx_core import GaussianLaw
from errors import InvalidArgumentError, NumericalFailureError
from sarx_analytic import QuadForm
from settings import (
    EIGEN_ZERO_TOL,
    GCHISQ_ABS_TOL,
    GCHISQ_ALLOW_FALLBACK,
    GCHISQ_FALLBACK_DRAWS,
    GCHISQ_FALLBACK_SEED,
    GCHISQ_FALLBACK_TOL,
    GCHISQ_QUAD_LIMIT,
    app_logger,
)

# beyond this many standard deviations Chebyshev bounds the tail by 1e-8
_TAIL_SDS = 1e4


@dataclass(frozen=True, eq=False)
class GChi2:
    lam: np.ndarray
    r: np.ndarray
    delta2: np.ndarray
    mu: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
        r = np.broadcast_to(np.asarray(self.r, dtype=float), lam.shape).copy()
        delta2 = np.broadcast_to(np.asarray(self.delta2, dtype=float), lam.shape).copy()
        if np.any(lam == 0):
            raise InvalidArgumentError("eigenvalue weights must be non-zero")
        if np.any(delta2 < 0) or np.any(r <= 0) or self.sigma < 0:
            raise InvalidArgumentError("need delta2 >= 0, r > 0 and sigma >= 0")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "delta2", delta2)
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def k(self) -> int:
        return self.lam.size

    @property
    def degenerate(self) -> bool:
        return self.k == 0 and self.sigma == 0.0


@dataclass(frozen=True)
class CdfResult:
    value: float
    error: float
    method: str  # "exact" | "imhof" | "simulation"


def params_from_quadform(q: QuadForm, law: GaussianLaw) -> GChi2:
    """Law of q(y) for y = m + sigma * L^-1 eps."""
    if not np.allclose(q.A, q.A.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(q.A).max())):
        raise InvalidArgumentError("quadratic form matrix must be symmetric")
    if q.T != law.T:
        raise InvalidArgumentError(f"form has size {q.T} but the law has {law.T}")
    s = np.sqrt(law.sigma2)
    C = law.factor_inverse
    M = law.sigma2 * (C.T @ q.A @ C)
    lam, U = linalg.eigh((M + M.T) / 2.0)
    linear = q.b + 2.0 * q.A @ law.mean
    b_rot = s * (U.T @ (C.T @ linear))
    offset = law.mean @ q.A @ law.mean + q.b @ law.mean + q.c
    scale = np.max(np.abs(lam), initial=0.0)
    active = np.abs(lam) > EIGEN_ZERO_TOL * scale if scale > 0 else np.zeros(lam.size, dtype=bool)
    lam_a, b_a = lam[active], b_rot[active]
    return GChi2(
        lam=lam_a,
        r=np.ones(lam_a.size),
        delta2=(b_a / (2.0 * lam_a)) ** 2,
        mu=offset - np.sum(b_a**2 / (4.0 * lam_a)),
        sigma=float(np.sqrt(np.sum(b_rot[~active] ** 2))),
    )


def moments(q: QuadForm, law: GaussianLaw) -> tuple[float, float]:
    """Exact mean and variance of q(y) under the law."""
    A, b, m, V, s2 = q.A, q.b, law.mean, law.unit_cov, law.sigma2
    AV = A @ V
    Am = A @ m
    mean = s2 * np.trace(AV) + m @ Am + b @ m + q.c
    var = (
        2.0 * s2**2 * np.sum(AV * AV.T)
        + s2 * b @ V @ b
        + 4.0 * s2 * b @ V @ Am
        + 4.0 * s2 * Am @ V @ Am
    )
    return float(mean), float(var)


def analytic_moments(d: GChi2) -> tuple[float, float]:
    mean = d.mu + np.sum(d.lam * (d.r + d.delta2))
    var = d.sigma**2 + np.sum(2.0 * d.lam**2 * (d.r + 2.0 * d.delta2))
    return float(mean), float(var)


class _Integrand:
    """Pieces of the Imhof integrand with the drift mu*t removed from the phase."""

    def __init__(self, d: GChi2):
        self.d = d
        self.slope = float(np.sum(d.lam * (d.r + d.delta2)))

    def phase_and_log_rho(self, t: float) -> tuple[float, float]:
        d = self.d
        two_lt = 2.0 * d.lam * t
        denom = 1.0 + two_lt**2
        phase = np.sum(0.5 * d.r * np.arctan(two_lt) + d.lam * d.delta2 * t / denom)
        log_rho = np.sum(0.25 * d.r * np.log1p(two_lt**2) + 0.5 * d.delta2 * two_lt**2 / denom)
        return float(phase), float(log_rho + 0.5 * d.sigma**2 * t**2)

    def sin_part(self, t: float) -> float:
        """sin(theta)/(t rho), regular at 0."""
        if t == 0.0:
            return self.slope
        phase, log_rho = self.phase_and_log_rho(t)
        return np.sin(phase) * np.exp(-log_rho) / t

    def cos_part(self, t: float) -> float:
        """cos(theta)/(t rho)."""
        phase, log_rho = self.phase_and_log_rho(t)
        return np.cos(phase) * np.exp(-log_rho) / t

    def cos_part_centered(self, t: float) -> float:
        """(cos(theta)/rho - 1)/t, regular at 0."""
        if t == 0.0:
            return 0.0
        phase, log_rho = self.phase_and_log_rho(t)
        return (np.cos(phase) * np.exp(-log_rho) - 1.0) / t


def _quad(func, a, b, **kwargs) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(func, a, b, limit=GCHISQ_QUAD_LIMIT, epsabs=GCHISQ_ABS_TOL / 10, **kwargs)[:2]
        except integrate.IntegrationWarning as exc:
            raise NumericalFailureError(f"quadrature did not converge: {exc}") from exc
    return float(value), float(err)


def _imhof(d: GChi2, w: float) -> tuple[float, float]:
    """F(w) = 1/2 - (1/pi) int_0^inf sin(theta(t) - (w - mu) t) / (t rho(t)) dt."""
    f = _Integrand(d)
    _, var = analytic_moments(d)
    t0 = 8.0 / np.sqrt(var)
    omega = w - d.mu
    sign, freq = np.sign(omega), abs(omega)
    total, error = 0.0, 0.0
    if freq == 0.0:
        for a, b in ((0.0, t0), (t0, np.inf)):
            value, err = _quad(f.sin_part, a, b)
            total, error = total + value, error + err
    else:
        # finite part: sin(th)cos(wt) - cos(th) sin(wt), with cos(th)/rho - 1 separated off
        head_cos, e1 = _quad(f.sin_part, 0.0, t0, weight="cos", wvar=freq)
        head_sin, e2 = _quad(f.cos_part_centered, 0.0, t0, weight="sin", wvar=freq)
        si, _ = special.sici(freq * t0)
        tail_cos, e3 = _quad(f.sin_part, t0, np.inf, weight="cos", wvar=freq)
        tail_sin, e4 = _quad(f.cos_part, t0, np.inf, weight="sin", wvar=freq)
        total = head_cos - sign * (head_sin + si) + tail_cos - sign * tail_sin
        error = e1 + e2 + e3 + e4
    return 0.5 - total / np.pi, error / np.pi


def cdf_detail(d: GChi2, w: float, allow_fallback: bool = GCHISQ_ALLOW_FALLBACK) -> CdfResult:
    w = float(w)
    if d.k == 0:
        if d.sigma == 0.0:
            return CdfResult(1.0 if w >= d.mu else 0.0, 0.0, "exact")
        return CdfResult(float(stats.norm.cdf(w, d.mu, d.sigma)), 0.0, "exact")
    mean, var = analytic_moments(d)
    if abs(w - mean) > _TAIL_SDS * np.sqrt(var):
        return CdfResult(0.0 if w < mean else 1.0, 1.0 / _TAIL_SDS**2, "exact")
    failure: NumericalFailureError | None = None
    try:
        value, error = _imhof(d, w)
        if error <= GCHISQ_FALLBACK_TOL:
            return CdfResult(float(np.clip(value, 0.0, 1.0)), error, "imhof")
        failure = NumericalFailureError(
            f"CDF error estimate {error:.2e} exceeds {GCHISQ_FALLBACK_TOL:.0e}",
            estimate=float(value),
            diagnostics={"error": error, "w": w},
        )
    except NumericalFailureError as exc:
        failure = exc
    if not allow_fallback:
        raise failure
    app_logger.warning(f"gchisq CDF at w={w:.6g} falls back to simulation: {failure}")
    draws = sample(d, GCHISQ_FALLBACK_DRAWS, GCHISQ_FALLBACK_SEED)
    value = float(np.mean(draws <= w))
    se = float(np.sqrt(max(value * (1 - value), 1e-12) / draws.size))
    return CdfResult(value, se, "simulation")


def cdf(d: GChi2, w: float) -> float:
    return cdf_detail(d, w).value


def quantile(d: GChi2, p: float) -> float:
    """Inverse CDF by bracketing and Brent's method."""
    if not 0.0 < p < 1.0:
        raise InvalidArgumentError("p must lie in (0, 1)")
    if d.k == 0:
        if d.sigma == 0.0:
            return d.mu
        return float(stats.norm.ppf(p, d.mu, d.sigma))
    mean, var = analytic_moments(d)
    sd = np.sqrt(var)
    lo, hi = mean - 4.0 * sd, mean + 4.0 * sd
    while cdf(d, lo) > p:
        lo -= 4.0 * sd
    while cdf(d, hi) < p:
        hi += 4.0 * sd
    return float(optimize.brentq(lambda x: cdf(d, x) - p, lo, hi, xtol=1e-8 * max(1.0, sd)))


def sample(d: GChi2, n: int, seed) -> np.ndarray:
    """Composition sampling: normal remainder plus weighted noncentral chi-squares."""
    rng = np.random.default_rng(seed)
    draws = d.mu + d.sigma * rng.standard_normal(n)
    for lam, r, nc in zip(d.lam, d.r, d.delta2):
        if nc > 0:
            draws += lam * stats.ncx2.rvs(r, nc, size=n, random_state=rng)
        else:
            draws += lam * stats.chi2.rvs(r, size=n, random_state=rng)
    return draws


def simulate_quadform(q: QuadForm, law: GaussianLaw, n: int, seed, chunk: int = 20_000) -> np.ndarray:
    """Pathwise draws of q(y) with y from the law."""
    rng = np.random.default_rng(seed)
    s = np.sqrt(law.sigma2)
    out = np.empty(n)
    for start in range(0, n, chunk):
        size = min(chunk, n - start)
        eps = rng.standard_normal((law.T, size))
        y = (law.mean[:, None] + s * linalg.solve_triangular(law.cov_factor, eps, lower=True)).T
        out[start : start + size] = np.einsum("ij,ij->i", y @ q.A, y) + y @ q.b + q.c
    return out


def gchi2_to_frame(d: GChi2) -> pd.DataFrame:
    frame = pd.DataFrame(
        {"j": np.arange(1, d.k + 1), "lambda": d.lam, "r": d.r, "delta2": d.delta2}
    )
    frame["mu"] = d.mu
    frame["sigma"] = d.sigma
    if d.k == 0:
        frame = pd.DataFrame([{"j": 0, "lambda": np.nan, "r": np.nan, "delta2": np.nan, "mu": d.mu, "sigma": d.sigma}])
    return frame
