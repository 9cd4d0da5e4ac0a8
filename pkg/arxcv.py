import argparse
import asyncio
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

import settings
from arx_core import save_covariates, save_paths, simulate
from cv_schemes import scheme_label
from errors import ArxCvError, ConfigError, InvalidArgumentError, NumericalFailureError
from experiments import (
    DEFAULT_ALPHAS,
    ENGINES,
    EXPERIMENT_TEMPLATES,
    SCHEME_CATALOGUE,
    SWEEP_AXES,
    ExperimentSpec,
    adverse_rates,
    covariates_for,
    dgp_for,
    elpd_distribution,
    load_experiment_config,
    run_experiment,
    run_table,
    sample_sizes,
    sweep,
)
from plots import PLOT_KINDS, emit_plot
from results_log import append_run_history, write_csv
from settings import DEFAULT_SEED, MAX_CONCURRENCY, OUTPUT_DIR, SAMPLE_SIZE_LOWER, SAMPLE_SIZE_UPPER, app_logger


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment definition")
    common.add_argument("--experiment", type=int, default=1, choices=sorted(EXPERIMENT_TEMPLATES),
                        help="Experiment id when no --config is given")
    common.add_argument("--variant", default="hard", choices=("easy", "hard"))
    common.add_argument("--seed", type=int, default=None, help=f"Overrides the experiment seed (default {DEFAULT_SEED})")
    common.add_argument("--out-dir", default=OUTPUT_DIR, help="Directory for CSV and SVG output")
    common.add_argument("--threads", type=int, default=MAX_CONCURRENCY, help="Worker threads")

    parser = argparse.ArgumentParser(
        description="Bayesian cross-validation model selection experiments for ARX models."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="Simulate series from the experiment DGP")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--n-paths", type=int, default=10)

    p = sub.add_parser("elpd-dist", parents=[common], help="Exact CDFs of the selection statistics")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--points", type=int, default=101)

    p = sub.add_parser("adverse-rate", parents=[common], help="Adverse selection probabilities")
    p.add_argument("--cost-reps", type=int, default=0, help="Simulated replicates for the selection cost")

    p = sub.add_parser("min-sample-size", parents=[common], help="Smallest well-separated T per scheme")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--lower", type=int, default=SAMPLE_SIZE_LOWER)
    p.add_argument("--upper", type=int, default=SAMPLE_SIZE_UPPER)
    p.add_argument("--step", type=int, default=1)

    p = sub.add_parser("experiment", help="Experiment runs")
    exp_sub = p.add_subparsers(dest="action", required=True)
    run = exp_sub.add_parser("run", parents=[common], help="Run one experiment")
    run.add_argument("--engine", default="analytic", choices=ENGINES)
    run.add_argument("--include-elpd", action="store_true",
                     help="Full-Bayes only: also estimate the true elpd difference per replicate")

    p = sub.add_parser("table", parents=[common], help="Adverse rates and SDs for every experiment")
    p.add_argument("--ids", type=_ints, default=sorted(EXPERIMENT_TEMPLATES))
    p.add_argument("--variants", default="hard,easy")
    p.add_argument("--alphas", type=_floats, default=list(DEFAULT_ALPHAS))
    p.add_argument("--T", type=int, default=100)

    p = sub.add_parser("sweep", parents=[common], help="Selection metrics along one axis")
    p.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p.add_argument("--values", required=True,
                   help="Comma-separated axis values; for the scheme axis, semicolon-separated labels or 'all'")

    p = sub.add_parser("plot", parents=[common], help="Render a CSV as SVG")
    p.add_argument("--csv", required=True)
    p.add_argument("--kind", required=True, choices=PLOT_KINDS)
    p.add_argument("--out", required=True)
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--series")
    p.add_argument("--title", default="")
    return parser


def resolve_spec(args) -> ExperimentSpec:
    if args.config:
        spec = load_experiment_config(args.config)
    else:
        spec = ExperimentSpec(id=args.experiment, variant=args.variant)
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    return spec


def _sweep_values(axis: str, text: str) -> list:
    if axis != "scheme":
        return _floats(text) if axis == "alpha" else _ints(text)
    catalogue = {scheme_label(s): s for s in SCHEME_CATALOGUE}
    if text.strip() == "all":
        return list(SCHEME_CATALOGUE)
    labels = [v.strip() for v in text.split(";" if ";" in text else " ") if v.strip()]
    missing = [label for label in labels if label not in catalogue]
    if missing:
        raise InvalidArgumentError(f"unknown schemes {missing}; choose from {sorted(catalogue)}")
    return [catalogue[label] for label in labels]


def _table_variants(text: str) -> list[str]:
    variants = [v.strip() for v in text.split(",") if v.strip()]
    unknown = sorted(set(variants) - {"easy", "hard"})
    if unknown or not variants:
        raise InvalidArgumentError(f"variants must be 'easy' and/or 'hard', got {text!r}")
    return variants


def prepare(args) -> dict:
    """Resolve and validate every input the command needs before anything runs."""
    if args.command == "plot":
        return {}
    inputs = {"spec": resolve_spec(args)}
    if args.command == "table":
        inputs["variants"] = _table_variants(args.variants)
        unknown = sorted(set(args.ids) - set(EXPERIMENT_TEMPLATES))
        if unknown:
            raise InvalidArgumentError(f"unknown experiment ids {unknown}")
    if args.command == "sweep":
        inputs["values"] = _sweep_values(args.axis, args.values)
    return inputs


async def dispatch(args, inputs: dict) -> list[Path]:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    threads = max(1, args.threads)
    if args.command == "plot":
        return [emit_plot(args.csv, args.kind, args.out, args.x, args.y, args.series, args.title)]

    spec = inputs["spec"]
    if args.command == "simulate":
        Z = covariates_for(spec)
        paths = simulate(dgp_for(spec, args.alpha, Z), np.random.SeedSequence(spec.seed), args.n_paths)
        return [save_paths(paths, out_dir / "paths.csv"), save_covariates(Z, out_dir / "covariates.csv")]
    if args.command == "elpd-dist":
        frame = await asyncio.to_thread(elpd_distribution, spec, args.alpha, args.points)
        return [write_csv(frame, out_dir / "elpd_dist.csv")]
    if args.command == "adverse-rate":
        frame = await adverse_rates(spec, threads, args.cost_reps)
        return [write_csv(frame, out_dir / "adverse_rate.csv")]
    if args.command == "min-sample-size":
        frame = await sample_sizes(spec, args.alpha, args.lower, args.upper, args.step, threads)
        return [write_csv(frame, out_dir / "min_sample_size.csv")]
    if args.command == "experiment":
        result = await run_experiment(spec, args.engine, threads, args.include_elpd)
        written = [write_csv(result.summary, out_dir / "summary.csv")]
        if not result.oracle.empty:
            written.append(write_csv(result.oracle, out_dir / "oracle.csv"))
        if not result.replicates.empty:
            written.append(write_csv(result.replicates, out_dir / "replicates.csv"))
        for T, Z in result.covariates.items():
            written.append(save_covariates(Z, out_dir / f"covariates_T{T}.csv"))
        return written
    if args.command == "table":
        frame = await run_table(args.ids, inputs["variants"], tuple(args.alphas), args.T, spec.seed, threads)
        return [write_csv(frame, out_dir / "table.csv")]
    if args.command == "sweep":
        frame = await sweep(spec, args.axis, inputs["values"], threads)
        return [write_csv(frame, out_dir / f"sweep_{args.axis}.csv")]
    raise InvalidArgumentError(f"unknown command {args.command!r}")


async def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command if args.command != "experiment" else f"experiment {args.action}"
    if settings.CONFIG_LOAD_ERROR:
        app_logger.critical(f"Configuration error: {settings.CONFIG_LOAD_ERROR}")
        return ConfigError.exit_code
    app_logger.info(f"Starting {command}")
    arguments = {k: v for k, v in vars(args).items() if k not in ("command", "action")}
    try:
        inputs = prepare(args)
    except ArxCvError as exc:
        app_logger.critical(f"{command} failed (argument error): {exc}")
        await append_run_history(command, arguments, [], f"failed: {exc}")
        return exc.exit_code
    try:
        written = await dispatch(args, inputs)
    except ArxCvError as exc:
        # once inputs are validated only configuration problems keep code 2
        config = isinstance(exc, ConfigError)
        app_logger.critical(f"{command} failed ({'config' if config else 'run'} error): {exc}")
        await append_run_history(command, arguments, [], f"failed: {exc}")
        return exc.exit_code if config else NumericalFailureError.exit_code
    await append_run_history(command, arguments, written, "ok")
    app_logger.info(f"{command} complete; wrote {len(written)} file(s)")
    return 0


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
