"""ARX(p,q) processes: coefficient matrices, joint Gaussian law, simulation.

The series starts from zero initial values, so with the banded unit
lower-triangular coefficient matrix ``L`` the whole path satisfies
``L y = Z beta + sigma * eps`` and ``y ~ N(L^-1 Z beta, sigma^2 (L'L)^-1)``.
Products with ``L``, ``L'`` and ``L^-1`` are evaluated as linear filters.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import linalg, signal

from errors import InvalidArgumentError, NumericalFailureError
from settings import STATIONARITY_MARGIN


def _as_vector(values, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.array(values, dtype=float))
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional")
    return arr


def default_lags(p: int) -> tuple[int, ...]:
    return tuple(range(1, p + 1))


def check_lags(lags, p: int) -> tuple[int, ...]:
    """Validates an explicit lag set; ``None`` means lags ``1..p``."""
    if lags is None:
        return default_lags(p)
    lags = tuple(int(lag) for lag in lags)
    if len(lags) != p:
        raise InvalidArgumentError(f"expected {p} lags, got {len(lags)}")
    if any(lag < 1 for lag in lags) or any(b <= a for a, b in zip(lags, lags[1:])):
        raise InvalidArgumentError(f"lags must be strictly increasing and positive: {lags}")
    return lags


def expand_phi(phi, lags=None) -> np.ndarray:
    """Dense coefficient vector of length max(lags) with zeros on skipped lags."""
    phi = _as_vector(phi, "phi")
    lags = check_lags(lags, len(phi))
    full = np.zeros(max(lags, default=0))
    for coef, lag in zip(phi, lags):
        full[lag - 1] = coef
    return full


def ar_polynomial(phi, lags=None) -> np.ndarray:
    """Filter coefficients (1, -phi_1, ..., -phi_m) of the AR operator."""
    return np.r_[1.0, -expand_phi(phi, lags)]


def is_stationary(phi, lags=None, margin: float = STATIONARITY_MARGIN) -> bool:
    full = expand_phi(phi, lags)
    if full.size == 0:
        return True
    radius = np.max(np.abs(np.linalg.eigvals(linalg.companion(np.r_[1.0, -full]))))
    return bool(radius < 1.0 - margin)


def build_coeff_matrix(phi, T: int, lags=None, p: int | None = None) -> np.ndarray:
    """Banded unit-lower-triangular T x T matrix with -phi_i on subdiagonal lags[i]."""
    phi = _as_vector(phi, "phi")
    if p is not None and len(phi) != p:
        raise InvalidArgumentError(f"phi has length {len(phi)} but p={p}")
    if T < 1:
        raise InvalidArgumentError("T must be at least 1")
    lags = check_lags(lags, len(phi))
    L = np.eye(T)
    for coef, lag in zip(phi, lags):
        if lag < T:
            rows = np.arange(lag, T)
            L[rows, rows - lag] = -coef
    return L


def apply_coeff(phi, x: np.ndarray, lags=None) -> np.ndarray:
    """Returns ``L x`` along axis 0."""
    return signal.lfilter(ar_polynomial(phi, lags), [1.0], x, axis=0)


def apply_coeff_transpose(phi, x: np.ndarray, lags=None) -> np.ndarray:
    """Returns ``L' x`` along axis 0."""
    return np.flip(apply_coeff(phi, np.flip(x, axis=0), lags), axis=0)


def solve_coeff(phi, x: np.ndarray, lags=None) -> np.ndarray:
    """Returns ``L^-1 x`` along axis 0 (the AR recursion from zero)."""
    return signal.lfilter([1.0], ar_polynomial(phi, lags), x, axis=0)


@dataclass(frozen=True, eq=False)
class ArxSpec:
    """A concrete ARX(p,q) parameterization over a fixed covariate matrix."""

    phi: np.ndarray
    beta: np.ndarray
    sigma2: float
    Z: np.ndarray
    lags: tuple[int, ...] | None = None
    stationary: bool = False

    def __post_init__(self):
        phi = _as_vector(self.phi, "phi")
        beta = _as_vector(self.beta, "beta")
        Z = np.array(self.Z, dtype=float)
        if Z.ndim != 2:
            raise InvalidArgumentError("Z must be a T x q matrix")
        if Z.shape[1] != beta.size:
            raise InvalidArgumentError(
                f"Z has {Z.shape[1]} columns but beta has {beta.size} entries"
            )
        if Z.shape[1] < 1 or not np.all(Z[:, 0] == 1.0):
            raise InvalidArgumentError("first column of Z must be all ones")
        if not self.sigma2 > 0:
            raise InvalidArgumentError(f"sigma2 must be positive, got {self.sigma2}")
        lags = check_lags(self.lags, phi.size)
        if self.stationary and not is_stationary(phi, lags):
            raise InvalidArgumentError(f"phi={phi.tolist()} is not stationary")
        for arr in (phi, beta, Z):
            arr.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "lags", lags)
        object.__setattr__(self, "sigma2", float(self.sigma2))

    @property
    def p(self) -> int:
        return self.phi.size

    @property
    def q(self) -> int:
        return self.beta.size

    @property
    def T(self) -> int:
        return self.Z.shape[0]

    def replace(self, **changes) -> "ArxSpec":
        fields = dict(
            phi=self.phi, beta=self.beta, sigma2=self.sigma2, Z=self.Z,
            lags=self.lags, stationary=self.stationary,
        )
        if "phi" in changes and "lags" not in changes:
            fields["lags"] = None if len(changes["phi"]) != self.p else self.lags
        fields.update(changes)
        return ArxSpec(**fields)


@dataclass(frozen=True, eq=False)
class GaussianLaw:
    """N(mean, sigma2 * (L'L)^-1) with L unit-lower-triangular."""

    mean: np.ndarray
    cov_factor: np.ndarray
    sigma2: float

    @property
    def T(self) -> int:
        return self.mean.size

    @cached_property
    def factor_inverse(self) -> np.ndarray:
        return linalg.solve_triangular(self.cov_factor, np.eye(self.T), lower=True)

    @cached_property
    def unit_cov(self) -> np.ndarray:
        """(L'L)^-1, the covariance divided by sigma2; its determinant is 1."""
        C = self.factor_inverse
        return C @ C.T

    def covariance(self) -> np.ndarray:
        return self.sigma2 * self.unit_cov


def joint_law(spec: ArxSpec) -> GaussianLaw:
    L = build_coeff_matrix(spec.phi, spec.T, spec.lags)
    mean = solve_coeff(spec.phi, spec.Z @ spec.beta, spec.lags)
    return GaussianLaw(mean=mean, cov_factor=L, sigma2=spec.sigma2)


def log_density(y: np.ndarray, law: GaussianLaw) -> np.ndarray:
    """Gaussian log density of one path (T,) or many paths (n, T)."""
    y = np.asarray(y, dtype=float)
    resid = (y - law.mean) @ law.cov_factor.T
    logdet = np.sum(np.log(np.abs(np.diag(law.cov_factor))))
    return (
        -0.5 * law.T * np.log(2 * np.pi * law.sigma2)
        + logdet
        - 0.5 * np.sum(resid**2, axis=-1) / law.sigma2
    )


def simulate(spec: ArxSpec, seed, n_paths: int = 1) -> np.ndarray:
    """Draws ``n_paths`` series through the AR recursion; returns (n_paths, T)."""
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal((n_paths, spec.T))
    drive = spec.Z @ spec.beta + np.sqrt(spec.sigma2) * eps
    return signal.lfilter([1.0], ar_polynomial(spec.phi, spec.lags), drive, axis=1)


def dgp_from_alpha(alpha: float, base_phi, beta, sigma2: float, Z, lags=None) -> ArxSpec:
    """Scales ``base_phi`` by the dependence level ``alpha``."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidArgumentError(f"alpha must lie in [0, 1], got {alpha}")
    base_phi = _as_vector(base_phi, "base_phi")
    if not is_stationary(base_phi, lags):
        raise InvalidArgumentError(f"base_phi={base_phi.tolist()} is not stationary")
    return ArxSpec(phi=alpha * base_phi, beta=beta, sigma2=sigma2, Z=Z, lags=lags, stationary=True)


class MarginalPrecision:
    """Inverse covariance of the sub-vector ``y[train]`` of an ARX series.

    With unit covariance W = (L'L)^-1 the precision of ``y[train]`` is the
    Schur complement Q_tt - Q_tR Q_RR^-1 Q_Rt of Q = L'L over the removed
    set R. When the train set is a prefix it reduces to L_tt' L_tt. Indices
    are zero-based; inputs are full-length arrays whose rows outside the
    train set are ignored.
    """

    def __init__(self, phi, T: int, train: np.ndarray, lags=None):
        self.phi = _as_vector(phi, "phi")
        self.lags = check_lags(lags, self.phi.size)
        self.T = T
        self.train = np.asarray(train, dtype=int)
        mask = np.zeros(T, dtype=bool)
        mask[self.train] = True
        self.mask = mask
        self.removed = np.flatnonzero(~mask)
        n = self.train.size
        self.is_prefix = n == 0 or (self.train[-1] == n - 1)
        if self.is_prefix or self.removed.size == 0:
            self._chol = None
            self._q_removed_cols = None
        else:
            unit = np.zeros((T, self.removed.size))
            unit[self.removed, np.arange(self.removed.size)] = 1.0
            q_cols = apply_coeff_transpose(self.phi, apply_coeff(self.phi, unit, self.lags), self.lags)
            q_rr = q_cols[self.removed]
            try:
                self._chol = linalg.cho_factor(q_rr, lower=True)
            except linalg.LinAlgError as exc:
                raise NumericalFailureError("precision block is not positive definite") from exc
            self._q_removed_cols = q_cols

    def _masked(self, x: np.ndarray) -> np.ndarray:
        x = np.array(x, dtype=float, copy=True)
        x[~self.mask] = 0.0
        return x

    def apply(self, x: np.ndarray) -> np.ndarray:
        """P y[train] embedded in a full-length array (zero outside train)."""
        u = apply_coeff(self.phi, self._masked(x), self.lags)
        if self.is_prefix:
            u[self.train.size:] = 0.0
        out = apply_coeff_transpose(self.phi, u, self.lags)
        if self._chol is not None:
            coupling = out[self.removed]
            out = out - self._q_removed_cols @ linalg.cho_solve(self._chol, coupling)
        out[~self.mask] = 0.0
        return out

    def inner(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """x[train]' P y[train]."""
        return self._masked(x).T @ self.apply(y)

    def logdet_cov(self) -> float:
        """log |W[train, train]|."""
        if self._chol is None:
            return 0.0
        return float(2.0 * np.sum(np.log(np.diag(self._chol[0]))))


def make_covariates(T: int, q: int, seed) -> np.ndarray:
    """Standard-normal T x q covariates with an intercept column."""
    if q < 1:
        raise InvalidArgumentError("q must be at least 1")
    Z = np.random.default_rng(seed).standard_normal((T, q))
    Z[:, 0] = 1.0
    return Z


def save_covariates(Z: np.ndarray, path) -> Path:
    path = Path(path)
    frame = pd.DataFrame(Z, columns=[f"z{j + 1}" for j in range(Z.shape[1])])
    frame.to_csv(path, index=False, float_format="%.17g")
    return path


def load_covariates(path) -> np.ndarray:
    Z = pd.read_csv(path).to_numpy(dtype=float)
    if Z.ndim != 2 or not np.all(Z[:, 0] == 1.0):
        raise InvalidArgumentError(f"{path} does not hold a covariate matrix with an intercept")
    return Z


def save_paths(paths: np.ndarray, path) -> Path:
    path = Path(path)
    paths = np.atleast_2d(paths)
    frame = pd.DataFrame(paths, columns=[f"y{t + 1}" for t in range(paths.shape[1])])
    frame.to_csv(path, index=False, float_format="%.17g")
    return path
