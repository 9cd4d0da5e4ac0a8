"""Decision quality of pairwise model selection.

The selection statistic is omega = score(A) - score(B); positive values
favour model A, which is the better model by construction of the setup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from arx_core import ArxSpec, GaussianLaw, joint_law, simulate
from cv_schemes import SchemeSpec, make_plan, scheme_label
from errors import InvalidArgumentError
from gchisq import cdf, moments, params_from_quadform, quantile
from sarx_analytic import (
    QuadForm,
    SarxModel,
    cv_quadform,
    diff,
    eljpd_quadform,
    elppd_quadform,
    full_indices,
)
from settings import GAMMA, SAMPLE_SIZE_LOWER, SAMPLE_SIZE_UPPER, app_logger

TARGETS = ("cv", "eljpd", "elppd")


@dataclass(frozen=True, eq=False)
class ComparisonSetup:
    dgp: ArxSpec
    model_a: SarxModel
    model_b: SarxModel
    scheme: SchemeSpec
    gamma: float = GAMMA

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise InvalidArgumentError(f"gamma must lie in (0, 1), got {self.gamma}")
        if not self.dgp.T == self.model_a.T == self.model_b.T:
            raise InvalidArgumentError("DGP and both models must share T")

    @property
    def T(self) -> int:
        return self.dgp.T

    def swapped(self) -> "ComparisonSetup":
        return ComparisonSetup(self.dgp, self.model_b, self.model_a, self.scheme, self.gamma)


def _score_form(model: SarxModel, setup: ComparisonSetup, target: str) -> QuadForm:
    if target == "cv":
        return cv_quadform(model, make_plan(setup.scheme, setup.T))
    everything = full_indices(setup.T)
    if target == "eljpd":
        return eljpd_quadform(model, setup.dgp, everything, everything)
    if target == "elppd":
        return elppd_quadform(model, setup.dgp, everything, everything)
    raise InvalidArgumentError(f"unknown target {target!r}; expected one of {TARGETS}")


def selection_quadform(setup: ComparisonSetup, target: str = "cv") -> QuadForm:
    return diff(_score_form(setup.model_a, setup, target), _score_form(setup.model_b, setup, target))


def adverse_probability_of(omega: QuadForm, law: GaussianLaw) -> float:
    """P(omega(y) < 0) for y drawn from ``law``."""
    return float(np.clip(cdf(params_from_quadform(omega, law), 0.0), 0.0, 1.0))


def adverse_probability(setup: ComparisonSetup, target: str = "cv") -> float:
    return adverse_probability_of(selection_quadform(setup, target), joint_law(setup.dgp))


def is_well_separated(prob: float, gamma: float = GAMMA) -> bool:
    return prob < gamma


def selection_summary(setup: ComparisonSetup, target: str = "cv") -> dict:
    """Adverse probability plus mean, sd and 98% interval of the statistic."""
    omega = selection_quadform(setup, target)
    law = joint_law(setup.dgp)
    dist = params_from_quadform(omega, law)
    mean, var = moments(omega, law)
    return {
        "scheme": scheme_label(setup.scheme) if target == "cv" else target,
        "mode": setup.scheme.mode.value if target == "cv" else ("joint" if target == "eljpd" else "pointwise"),
        "T": setup.T,
        "adverse_prob": float(np.clip(cdf(dist, 0.0), 0.0, 1.0)),
        "mean": mean,
        "sd": float(np.sqrt(max(var, 0.0))),
        "q01": quantile(dist, 0.01),
        "q99": quantile(dist, 0.99),
    }


@dataclass(frozen=True, eq=False)
class CostSamples:
    costs: np.ndarray
    chose_a: np.ndarray

    @property
    def adverse_rate(self) -> float:
        return float(np.mean(self.costs > 0))


def cost_samples(setup: ComparisonSetup, n_reps: int, seed) -> CostSamples:
    """Realized loss of the CV choice: max eljpd(y) minus the chosen model's eljpd(y)."""
    plan = make_plan(setup.scheme, setup.T)
    everything = full_indices(setup.T)
    ys = simulate(setup.dgp, seed, n_reps)
    statistic = cv_quadform(setup.model_a, plan)(ys) - cv_quadform(setup.model_b, plan)(ys)
    elpd_a = eljpd_quadform(setup.model_a, setup.dgp, everything, everything)(ys)
    elpd_b = eljpd_quadform(setup.model_b, setup.dgp, everything, everything)(ys)
    chose_a = statistic >= 0
    chosen = np.where(chose_a, elpd_a, elpd_b)
    return CostSamples(costs=np.maximum(elpd_a, elpd_b) - chosen, chose_a=chose_a)


def expected_cost(setup: ComparisonSetup, n_reps: int, seed) -> dict:
    sample = cost_samples(setup, n_reps, seed)
    return {
        "expected_cost": float(np.mean(sample.costs)),
        "cost_se": float(np.std(sample.costs, ddof=1) / np.sqrt(n_reps)) if n_reps > 1 else 0.0,
        "cost_adverse_rate": sample.adverse_rate,
        "cv_chose_b_rate": float(1.0 - np.mean(sample.chose_a)),
    }


@dataclass
class SampleSizeSearch:
    """Memoized adverse probabilities along T for one setup template."""

    template: Callable[[int], ComparisonSetup]
    gamma: float = GAMMA
    target: str = "cv"
    evaluated: dict[int, float] = field(init=False, default_factory=dict)

    def prob(self, T: int) -> float:
        if T not in self.evaluated:
            self.evaluated[T] = adverse_probability(self.template(T), self.target)
            app_logger.info(f"adverse probability at T={T}: {self.evaluated[T]:.6f}")
        return self.evaluated[T]

    def separated(self, T: int) -> bool:
        return is_well_separated(self.prob(T), self.gamma)


def scan_sample_size(template, gamma: float = GAMMA, lower: int = SAMPLE_SIZE_LOWER,
                     upper: int = SAMPLE_SIZE_UPPER, step: int = 1, target: str = "cv",
                     search: SampleSizeSearch | None = None) -> int | None:
    """Smallest T on the grid lower, lower+step, ... with adverse probability below gamma."""
    search = search or SampleSizeSearch(template, gamma, target)
    for T in range(lower, upper + 1, step):
        if search.separated(T):
            return T
    return None


def min_sample_size(template, gamma: float = GAMMA, lower: int = SAMPLE_SIZE_LOWER,
                    upper: int = SAMPLE_SIZE_UPPER, step: int = 1, target: str = "cv") -> int | None:
    """Binary search for the smallest well-separated T; ``None`` when even ``upper`` fails."""
    search = SampleSizeSearch(template, gamma, target)
    if search.separated(lower):
        return lower
    if not search.separated(upper):
        return None
    lo, hi = lower, upper  # lo fails, hi succeeds
    while hi - lo > step:
        mid = lo + (hi - lo) // 2
        if search.separated(mid):
            hi = mid
        else:
            lo = mid
    probes = {T for T in (hi + step, (hi + upper) // 2) if hi < T <= upper}
    if all(search.separated(T) for T in probes):
        return hi
    app_logger.warning("adverse probability is not monotone in T; switching to a linear scan")
    return scan_sample_size(template, gamma, lower, upper, step, target, search)
