"""Experiment definitions, replication runs and parameter sweeps.

Each experiment pits a richer candidate A against a simpler candidate B
under an ARX DGP whose autoregressive part is scaled by the dependence
level alpha. The analytic engine evaluates selection statistics exactly
with oracle plug-in values; the full-Bayes engine replicates data and
scores both candidates with phi integrated out.
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Iterable

import numpy as np
import pandas as pd

from arx_core import ArxSpec, dgp_from_alpha, joint_law, load_covariates, make_covariates
from cv_schemes import Mode, SchemeSpec, scheme_from_dict, scheme_label, scheme_to_dict
from errors import ConfigError, InfeasibleSchemeError, InvalidArgumentError, NumericalFailureError
from full_bayes import FullCandidate, FullPrior, replicate_row
from gchisq import cdf, params_from_quadform, quantile
from oracle import OracleResult, oracle_model
from results_log import sort_rows
from sarx_analytic import SarxModel, make_model
from selection_analysis import (
    ComparisonSetup,
    adverse_probability_of,
    expected_cost,
    is_well_separated,
    min_sample_size,
    selection_quadform,
    selection_summary,
)
from settings import (
    DEFAULT_SEED,
    FULL_BAYES_ELPD_DRAWS,
    FULL_BAYES_POSTERIOR_DRAWS,
    FULL_BAYES_REPLICATES,
    GAMMA,
    MAX_CONCURRENCY,
    SAMPLE_SIZE_LOWER,
    SAMPLE_SIZE_UPPER,
    app_logger,
)

BETA_EASY = (1.0, 2.0, 1.0)
BETA_HARD = (1.0, 0.5, 1.0)
DGP_Q = 3
DEFAULT_ALPHAS = (0.0, 0.5, 0.75, 1.0)
DEFAULT_SCHEMES = (SchemeSpec.loo(), SchemeSpec.hv_block(3, 3, Mode.JOINT))
ENGINES = ("analytic", "full-bayes")
SWEEP_AXES = ("alpha", "T", "h", "v", "scheme", "seed")
SCHEME_CATALOGUE = (
    SchemeSpec.loo(),
    SchemeSpec.h_block(3),
    SchemeSpec.hv_block(3, 3, Mode.JOINT),
    SchemeSpec.hv_block(3, 3, Mode.POINTWISE),
    SchemeSpec.kfold(5, Mode.JOINT),
    SchemeSpec.kfold(5, Mode.POINTWISE),
    SchemeSpec.kfold(10, Mode.JOINT),
    SchemeSpec.kfold(10, Mode.POINTWISE),
    SchemeSpec.lfo(3, 3, 10, Mode.JOINT),
    SchemeSpec.lfo(3, 3, 10, Mode.POINTWISE),
)

SUMMARY_COLUMNS = [
    "experiment", "variant", "engine", "alpha", "T", "scheme", "mode",
    "adverse_prob", "mean", "sd", "q01", "q99", "replicates", "error",
]


@dataclass(frozen=True)
class Candidate:
    p: int
    q: int
    lags: tuple[int, ...] | None = None

    @property
    def label(self) -> str:
        lag_note = "" if self.lags is None else f" lags={list(self.lags)}"
        return f"ARX({self.p},{self.q}){lag_note}"


@dataclass(frozen=True)
class ExperimentTemplate:
    base_phi: tuple[float, ...]
    model_a: Candidate
    model_b: Candidate


EXPERIMENT_TEMPLATES = {
    1: ExperimentTemplate((0.75, 0.2), Candidate(1, 2), Candidate(1, 1)),
    2: ExperimentTemplate((0.95,), Candidate(1, 3), Candidate(1, 2)),
    3: ExperimentTemplate((0.95,), Candidate(1, 2), Candidate(1, 1)),
    4: ExperimentTemplate((0.95,), Candidate(0, 2), Candidate(0, 1)),
    5: ExperimentTemplate((0.75, 0.2), Candidate(1, 3), Candidate(1, 1, (2,))),
}


@dataclass(frozen=True)
class ExperimentSpec:
    id: int
    variant: str = "hard"
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHAS
    T: int = 100
    replicates: int = FULL_BAYES_REPLICATES
    seed: int = DEFAULT_SEED
    schemes: tuple[SchemeSpec, ...] = DEFAULT_SCHEMES
    sigma2: float = 1.0
    gamma: float = GAMMA
    covariates: str | None = None
    posterior_draws: int = FULL_BAYES_POSTERIOR_DRAWS
    elpd_draws: int = FULL_BAYES_ELPD_DRAWS

    def __post_init__(self):
        if self.id not in EXPERIMENT_TEMPLATES:
            raise InvalidArgumentError(f"experiment id must be one of {sorted(EXPERIMENT_TEMPLATES)}, got {self.id}")
        if self.variant not in ("easy", "hard"):
            raise InvalidArgumentError(f"variant must be 'easy' or 'hard', got {self.variant!r}")
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))
        if not self.alpha_grid or any(not 0.0 <= a <= 1.0 for a in self.alpha_grid):
            raise InvalidArgumentError("alpha_grid must be a non-empty list of values in [0, 1]")
        if self.T < 2:
            raise InvalidArgumentError("T must be at least 2")
        if self.replicates < 1:
            raise InvalidArgumentError("replicates must be positive")
        if self.sigma2 <= 0:
            raise InvalidArgumentError("sigma2 must be positive")
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if not self.schemes:
            raise InvalidArgumentError("at least one scheme is required")

    @property
    def entry(self) -> ExperimentTemplate:
        return EXPERIMENT_TEMPLATES[self.id]

    @property
    def beta(self) -> np.ndarray:
        return np.array(BETA_EASY if self.variant == "easy" else BETA_HARD)


def experiment_to_dict(spec: ExperimentSpec) -> dict:
    data = {
        "id": spec.id,
        "variant": spec.variant,
        "alpha_grid": list(spec.alpha_grid),
        "T": spec.T,
        "replicates": spec.replicates,
        "seed": spec.seed,
        "schemes": [scheme_to_dict(s) for s in spec.schemes],
        "sigma2": spec.sigma2,
        "gamma": spec.gamma,
        "posterior_draws": spec.posterior_draws,
        "elpd_draws": spec.elpd_draws,
    }
    if spec.covariates is not None:
        data["covariates"] = spec.covariates
    return data


def experiment_from_dict(data: dict) -> ExperimentSpec:
    known = {f.name for f in fields(ExperimentSpec)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown experiment keys: {sorted(unknown)}")
    if "id" not in data:
        raise ConfigError("experiment config needs an 'id'")
    values = dict(data)
    try:
        if "schemes" in values:
            values["schemes"] = tuple(scheme_from_dict(s) for s in values["schemes"])
        if "alpha_grid" in values:
            values["alpha_grid"] = tuple(values["alpha_grid"])
        return ExperimentSpec(**values)
    except (InvalidArgumentError, TypeError) as exc:
        raise ConfigError(f"invalid experiment config: {exc}") from exc


def load_experiment_config(path) -> ExperimentSpec:
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"Could not read experiment config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a JSON object")
    return experiment_from_dict(data.get("experiment", data))


def save_experiment_config(spec: ExperimentSpec, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps({"experiment": experiment_to_dict(spec)}, indent=2))
    return path


def covariates_for(spec: ExperimentSpec, T: int | None = None) -> np.ndarray:
    """The experiment's T x 3 covariate matrix; one seeded stream per (experiment, T)."""
    T = T or spec.T
    if spec.covariates:
        Z = load_covariates(spec.covariates)
        if Z.shape[0] < T or Z.shape[1] < DGP_Q:
            raise ConfigError(f"{spec.covariates} holds {Z.shape}, need at least {T} x {DGP_Q}")
        return Z[:T, :DGP_Q]
    stream = np.random.SeedSequence(spec.seed, spawn_key=(spec.id, T, 0))
    return make_covariates(T, DGP_Q, stream)


def dgp_for(spec: ExperimentSpec, alpha: float, Z: np.ndarray) -> ArxSpec:
    return dgp_from_alpha(alpha, spec.entry.base_phi, spec.beta, spec.sigma2, Z)


def _analytic_candidate(spec: ExperimentSpec, cand: Candidate, Z: np.ndarray) -> SarxModel:
    prior_mean = spec.beta[: cand.q]
    return make_model(Z[:, : cand.q], np.zeros(cand.p), spec.sigma2, prior_mean, np.eye(cand.q), cand.lags)


def _full_candidate(spec: ExperimentSpec, cand: Candidate, Z: np.ndarray) -> FullCandidate:
    if cand.p != 1:
        raise InvalidArgumentError(f"full-Bayes engine needs ARX(1,q) candidates, got {cand.label}")
    lag = cand.lags[0] if cand.lags else 1
    prior = FullPrior(mu0=spec.beta[: cand.q], Sigma0=np.eye(cand.q))
    return FullCandidate(Z=Z[:, : cand.q], prior=prior, lag=lag)


@dataclass(frozen=True, eq=False)
class FittedPair:
    alpha: float
    T: int
    dgp: ArxSpec
    model_a: SarxModel
    model_b: SarxModel
    oracle_a: OracleResult
    oracle_b: OracleResult

    def setup(self, scheme: SchemeSpec, gamma: float) -> ComparisonSetup:
        return ComparisonSetup(self.dgp, self.model_a, self.model_b, scheme, gamma)

    def oracle_rows(self) -> list[dict]:
        return [
            {"alpha": self.alpha, "T": self.T, "model": name, **result.as_row()}
            for name, result in (("A", self.oracle_a), ("B", self.oracle_b))
        ]


def fit_pair(spec: ExperimentSpec, alpha: float, T: int | None = None) -> FittedPair:
    """Oracle plug-in fits of both candidates at one (alpha, T)."""
    T = T or spec.T
    Z = covariates_for(spec, T)
    dgp = dgp_for(spec, alpha, Z)
    model_a, oracle_a = oracle_model(_analytic_candidate(spec, spec.entry.model_a, Z), dgp)
    model_b, oracle_b = oracle_model(_analytic_candidate(spec, spec.entry.model_b, Z), dgp)
    app_logger.info(
        f"experiment {spec.id} alpha={alpha} T={T}: oracle A sigma2={oracle_a.sigma2_hat:.4f}, "
        f"B sigma2={oracle_b.sigma2_hat:.4f}"
    )
    return FittedPair(alpha, T, dgp, model_a, model_b, oracle_a, oracle_b)


async def run_bounded(jobs: Iterable[Callable[[], object]], threads: int = MAX_CONCURRENCY) -> list:
    """Runs blocking jobs on worker threads, at most ``threads`` at a time, results in job order."""
    semaphore = asyncio.Semaphore(max(1, threads))

    async def run(job):
        async with semaphore:
            return await asyncio.to_thread(job)

    return await asyncio.gather(*(run(job) for job in jobs))


async def fit_pairs(spec: ExperimentSpec, keys: Iterable[tuple[float, int]], threads: int) -> dict:
    keys = sorted(set(keys))
    pairs = await run_bounded([lambda a=a, T=T: fit_pair(spec, a, T) for a, T in keys], threads)
    return dict(zip(keys, pairs))


def _base_row(spec: ExperimentSpec, engine: str, alpha: float, T: int, scheme: SchemeSpec) -> dict:
    return {
        "experiment": spec.id,
        "variant": spec.variant,
        "engine": engine,
        "alpha": alpha,
        "T": T,
        "scheme": scheme_label(scheme),
        "mode": scheme.mode.value,
        "error": "",
    }


def analytic_row(spec: ExperimentSpec, pair: FittedPair, scheme: SchemeSpec) -> dict:
    row = _base_row(spec, "analytic", pair.alpha, pair.T, scheme)
    try:
        summary = selection_summary(pair.setup(scheme, spec.gamma))
    except (InfeasibleSchemeError, NumericalFailureError) as exc:
        app_logger.error(f"{row['scheme']} at alpha={pair.alpha}, T={pair.T} failed: {exc}", exc_info=True)
        row["error"] = str(exc)
        return row
    row.update({k: summary[k] for k in ("adverse_prob", "mean", "sd", "q01", "q99")})
    row["replicates"] = 0
    return row


def _empirical_summary(stats: np.ndarray) -> dict:
    return {
        "adverse_prob": float(np.mean(stats < 0)),
        "mean": float(np.mean(stats)),
        "sd": float(np.std(stats, ddof=1)) if stats.size > 1 else 0.0,
        "q01": float(np.quantile(stats, 0.01)),
        "q99": float(np.quantile(stats, 0.99)),
        "replicates": int(stats.size),
    }


@dataclass
class ExperimentResult:
    summary: pd.DataFrame
    oracle: pd.DataFrame = field(default_factory=pd.DataFrame)
    replicates: pd.DataFrame = field(default_factory=pd.DataFrame)
    covariates: dict[int, np.ndarray] = field(default_factory=dict)


async def _run_analytic(spec: ExperimentSpec, threads: int) -> ExperimentResult:
    pairs = await fit_pairs(spec, [(a, spec.T) for a in spec.alpha_grid], threads)
    jobs = [
        (lambda pair=pair, scheme=scheme: analytic_row(spec, pair, scheme))
        for pair in pairs.values()
        for scheme in spec.schemes
    ]
    rows = await run_bounded(jobs, threads)
    oracle_rows = [r for pair in pairs.values() for r in pair.oracle_rows()]
    return ExperimentResult(
        summary=pd.DataFrame(sort_rows(rows, ["alpha", "scheme"]), columns=SUMMARY_COLUMNS),
        oracle=pd.DataFrame(oracle_rows),
        covariates={spec.T: covariates_for(spec)},
    )


async def _run_full_bayes(spec: ExperimentSpec, threads: int, include_elpd: bool) -> ExperimentResult:
    Z = covariates_for(spec)
    model_a = _full_candidate(spec, spec.entry.model_a, Z)
    model_b = _full_candidate(spec, spec.entry.model_b, Z)
    summary_rows, replicate_rows = [], []
    for alpha in spec.alpha_grid:
        dgp = dgp_for(spec, alpha, Z)
        for scheme in spec.schemes:
            label = scheme_label(scheme)
            jobs = [
                (lambda i=i, scheme=scheme, dgp=dgp: replicate_row(
                    i, dgp, model_a, model_b, scheme, spec.seed, include_elpd,
                    spec.posterior_draws, spec.elpd_draws, _modes_of(scheme)))
                for i in range(spec.replicates)
            ]
            app_logger.info(f"full-Bayes {label} at alpha={alpha}: {spec.replicates} replicates")
            try:
                rows = await run_bounded(jobs, threads)
            except (InfeasibleSchemeError, NumericalFailureError) as exc:
                app_logger.error(f"{label} at alpha={alpha} failed: {exc}", exc_info=True)
                for mode in _modes_of(scheme):
                    row = _base_row(spec, "full-bayes", alpha, spec.T, scheme.with_mode(mode))
                    row["error"] = str(exc)
                    summary_rows.append(row)
                continue
            for row in rows:
                replicate_rows.append({"replicate": row["replicate"], "alpha": alpha, "variant": spec.variant,
                                       "scheme": label, **row})
            for mode in _modes_of(scheme):
                stats = np.array([r[f"stat_{mode.value}"] for r in rows])
                row = _base_row(spec, "full-bayes", alpha, spec.T, scheme.with_mode(mode))
                row.update(_empirical_summary(stats))
                summary_rows.append(row)
    return ExperimentResult(
        summary=pd.DataFrame(sort_rows(summary_rows, ["alpha", "scheme"]), columns=SUMMARY_COLUMNS),
        replicates=pd.DataFrame(sort_rows(replicate_rows, ["alpha", "scheme", "replicate"])),
        covariates={spec.T: Z},
    )


def _modes_of(scheme: SchemeSpec) -> tuple[Mode, ...]:
    # singleton test sets score identically in both modes
    if scheme.kind in ("loo", "h-block"):
        return (Mode.POINTWISE,)
    return (Mode.JOINT, Mode.POINTWISE)


async def run_experiment(spec: ExperimentSpec, engine: str = "analytic", threads: int = MAX_CONCURRENCY,
                         include_elpd: bool = False) -> ExperimentResult:
    """Per (alpha, scheme, mode): adverse rate and the statistic's mean, SD and 98% interval."""
    if engine not in ENGINES:
        raise InvalidArgumentError(f"engine must be one of {ENGINES}, got {engine!r}")
    app_logger.info(f"Running experiment {spec.id} ({spec.variant}) with the {engine} engine")
    if engine == "analytic":
        return await _run_analytic(spec, threads)
    return await _run_full_bayes(spec, threads, include_elpd)


def _axis_points(spec: ExperimentSpec, axis: str, values: list) -> list[tuple[float, int, SchemeSpec, object]]:
    """(alpha, T, scheme, axis value) grid points for one sweep."""
    if axis not in SWEEP_AXES:
        raise InvalidArgumentError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    points = []
    if axis == "alpha":
        for a in values:
            points += [(float(a), spec.T, s, float(a)) for s in spec.schemes]
    elif axis == "T":
        for T in values:
            points += [(a, int(T), s, int(T)) for a in spec.alpha_grid for s in spec.schemes]
    elif axis == "scheme":
        for s in values:
            points += [(a, spec.T, s, scheme_label(s)) for a in spec.alpha_grid]
    else:
        for value in values:
            for s in spec.schemes:
                varied = _vary_scheme(s, axis, int(value))
                if varied is not None:
                    points += [(a, spec.T, varied, int(value)) for a in spec.alpha_grid]
    if not points:
        raise InvalidArgumentError(f"no scheme of this experiment has a {axis!r} parameter")
    return points


def _vary_scheme(scheme: SchemeSpec, axis: str, value: int) -> SchemeSpec | None:
    if axis == "h":
        if scheme.kind in ("loo", "h-block"):
            return SchemeSpec.h_block(value)
        if scheme.kind in ("hv-block", "lfo"):
            return replace(scheme, h=value)
        return None
    if scheme.kind in ("hv-block", "lfo"):
        return replace(scheme, v=value)
    return None


async def _seed_sweep(spec: ExperimentSpec, values: list, threads: int) -> pd.DataFrame:
    """Rerun the experiment per covariate seed; Z is the only thing a seed changes."""
    if spec.covariates:
        app_logger.warning(f"covariates come from {spec.covariates}; the seed sweep will not change Z")
    frames = []
    for seed in sorted({int(v) for v in values}):
        result = await run_experiment(replace(spec, seed=seed), "analytic", threads)
        frames.append(result.summary.assign(axis="seed", value=seed))
    if not frames:
        raise InvalidArgumentError("seed sweep needs at least one seed")
    return pd.concat(frames, ignore_index=True)[["axis", "value", *SUMMARY_COLUMNS]]


async def sweep(spec: ExperimentSpec, axis: str, values: list, threads: int = MAX_CONCURRENCY) -> pd.DataFrame:
    """Analytic selection metrics along one axis with everything else fixed."""
    if axis == "seed":
        return await _seed_sweep(spec, values, threads)
    points = _axis_points(spec, axis, values)
    pairs = await fit_pairs(spec, [(a, T) for a, T, _, _ in points], threads)
    app_logger.info(f"Sweeping {axis} over {len(values)} values ({len(points)} grid points)")

    def job(alpha, T, scheme, value):
        return {"axis": axis, "value": value, **analytic_row(spec, pairs[(alpha, T)], scheme)}

    rows = await run_bounded([lambda p=p: job(*p) for p in points], threads)
    return pd.DataFrame(sort_rows(rows, ["value", "alpha", "scheme"]), columns=["axis", "value", *SUMMARY_COLUMNS])


async def run_table(ids: Iterable[int] = tuple(EXPERIMENT_TEMPLATES), variants: Iterable[str] = ("hard", "easy"),
                    alphas: tuple[float, ...] = DEFAULT_ALPHAS, T: int = 100, seed: int = DEFAULT_SEED,
                    threads: int = MAX_CONCURRENCY) -> pd.DataFrame:
    """Adverse selection percentages and statistic SDs for LOO and hv-block(3,3)/joint."""
    frames = []
    for exp_id in ids:
        for variant in variants:
            spec = ExperimentSpec(id=exp_id, variant=variant, alpha_grid=alphas, T=T, seed=seed)
            frames.append((await run_experiment(spec, "analytic", threads)).summary)
    table = pd.concat(frames, ignore_index=True)
    table["adverse_pct"] = 100.0 * table["adverse_prob"]
    return table[["experiment", "variant", "alpha", "scheme", "adverse_pct", "sd", "error"]]


async def adverse_rates(spec: ExperimentSpec, threads: int = MAX_CONCURRENCY, cost_reps: int = 0) -> pd.DataFrame:
    """Adverse probabilities with the well-separated flag, plus optional simulated selection cost."""
    pairs = await fit_pairs(spec, [(a, spec.T) for a in spec.alpha_grid], threads)

    def job(pair: FittedPair, scheme: SchemeSpec, index: int) -> dict:
        row = _base_row(spec, "analytic", pair.alpha, pair.T, scheme)
        try:
            setup = pair.setup(scheme, spec.gamma)
            prob = adverse_probability_of(selection_quadform(setup), joint_law(setup.dgp))
            row.update({"adverse_prob": prob, "well_separated": is_well_separated(prob, spec.gamma)})
            if cost_reps:
                seed = np.random.SeedSequence(spec.seed, spawn_key=(spec.id, pair.T, 2, index))
                row.update(expected_cost(setup, cost_reps, seed))
        except (InfeasibleSchemeError, NumericalFailureError) as exc:
            app_logger.error(f"{row['scheme']} at alpha={pair.alpha} failed: {exc}", exc_info=True)
            row["error"] = str(exc)
        return row

    jobs = [
        (lambda pair=pair, scheme=scheme, i=i: job(pair, scheme, i))
        for i, (pair, scheme) in enumerate((p, s) for p in pairs.values() for s in spec.schemes)
    ]
    rows = await run_bounded(jobs, threads)
    return pd.DataFrame(sort_rows(rows, ["alpha", "scheme"]))


def elpd_distribution(spec: ExperimentSpec, alpha: float, n_points: int = 101) -> pd.DataFrame:
    """CDF of each selection statistic (CV schemes and the eljpd/elppd targets) on a grid."""
    pair = fit_pair(spec, alpha)
    rows = []
    targets = [("cv", s) for s in spec.schemes] + [("eljpd", spec.schemes[0]), ("elppd", spec.schemes[0])]
    for target, scheme in targets:
        setup = pair.setup(scheme, spec.gamma)
        dist = params_from_quadform(selection_quadform(setup, target), joint_law(setup.dgp))
        lo, hi = quantile(dist, 0.001), quantile(dist, 0.999)
        label = scheme_label(scheme) if target == "cv" else target
        for w in np.linspace(lo, hi, n_points):
            rows.append({"alpha": alpha, "target": label, "w": float(w), "cdf": cdf(dist, float(w))})
    return pd.DataFrame(rows, columns=["alpha", "target", "w", "cdf"])


async def sample_sizes(spec: ExperimentSpec, alpha: float, lower: int = SAMPLE_SIZE_LOWER,
                       upper: int = SAMPLE_SIZE_UPPER, step: int = 1, threads: int = MAX_CONCURRENCY) -> pd.DataFrame:
    """Smallest well-separated T per scheme at one alpha."""

    def template_for(scheme: SchemeSpec):
        return lambda T: fit_pair(spec, alpha, T).setup(scheme, spec.gamma)

    def job(scheme: SchemeSpec) -> dict:
        row = {"experiment": spec.id, "variant": spec.variant, "alpha": alpha,
               "scheme": scheme_label(scheme), "gamma": spec.gamma, "error": ""}
        try:
            row["T_min"] = min_sample_size(template_for(scheme), spec.gamma, lower, upper, step)
        except (InfeasibleSchemeError, NumericalFailureError) as exc:
            app_logger.error(f"sample size search for {row['scheme']} failed: {exc}", exc_info=True)
            row["error"] = str(exc)
        return row

    rows = await run_bounded([lambda s=s: job(s) for s in spec.schemes], threads)
    return pd.DataFrame(sort_rows(rows, ["scheme"]), columns=["experiment", "variant", "alpha", "scheme", "gamma", "T_min", "error"])
