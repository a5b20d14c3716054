"""Command line interface: ``dmdd fit|forecast|reconstruct|benchmark|synth``.

Exit codes: 0 success, 2 usage or input format error, 3 numerical failure,
4 every benchmark cell failed.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .benchmark import BenchmarkConfig, dumps, run_benchmark, succeeded, write_outputs
from .dataio import load_csv, write_matrix_csv
from .dmd import (
    FitOptions,
    fit_delayed,
    forecast_delayed,
    load_model,
    reconstruct_delayed,
    save_model,
    with_labels,
)
from .errors import DmddError, InputError
from .metrics import PredictionPair, summarize
from .synth import generate, load_spec

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_ALL_FAILED = 0, 2, 3, 4


def _fit_options(args) -> FitOptions:
    return FitOptions(rank_tol=args.rank_tol, zero_eig_tol=args.zero_eig_tol)


def _out_csv(path, values, labels):
    write_matrix_csv(path if path not in (None, "-") else sys.stdout, values, labels)


def _labels(model):
    return list(model.channel_labels) if model.channel_labels else None


def cmd_fit(args) -> int:
    ds = load_csv(args.input, args.sample_rate)
    traj = ds.trajectory
    if args.input_frames is not None:
        if not 3 <= args.input_frames <= traj.frames:
            raise InputError(f"--input-frames must lie in [3, {traj.frames}]")
        traj = traj.head(args.input_frames)
    model = with_labels(fit_delayed(traj, args.delays, _fit_options(args)), ds.channel_labels)
    save_model(model, args.output)
    print(
        f"fitted {model.inner.rank} modes on {traj.frames} frames with {model.delays} delays",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_forecast(args) -> int:
    if args.horizon < 1:
        raise InputError(f"--horizon must be at least 1, got {args.horizon}")
    model = load_model(args.model)
    fc = forecast_delayed(model, args.horizon, args.average_blocks)
    _out_csv(args.output, fc, _labels(model))
    if args.ground_truth:
        gt = load_csv(args.ground_truth).trajectory.values
        if gt.shape[0] != fc.shape[0] or gt.shape[1] < args.horizon:
            raise InputError(
                f"ground truth has shape {gt.shape}, need {fc.shape[0]} channels "
                f"and at least {args.horizon} frames"
            )
        summary = summarize([PredictionPair(gt[:, :args.horizon], fc)])
        print(dumps(summary.to_dict()), end="")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    model = load_model(args.model)
    rec = reconstruct_delayed(model)
    _out_csv(args.output, rec, _labels(model))
    if args.ground_truth:
        gt = load_csv(args.ground_truth).trajectory.values
        if gt.shape[0] != rec.shape[0] or gt.shape[1] < model.n_frames:
            raise InputError(f"original data has shape {gt.shape}, expected {model.base_dim} "
                             f"channels and {model.n_frames} frames")
        summary = summarize([PredictionPair(gt[:, 1:model.n_frames], rec)])
        print(dumps(summary.to_dict()), end="")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    cfg = BenchmarkConfig.load(args.config)
    if args.input_frames:
        cfg = BenchmarkConfig(**{**cfg.__dict__, "input_lens": args.input_frames})
    out_dir = args.output or cfg.output_dir
    report, timings = run_benchmark(cfg, jobs=args.jobs)
    if out_dir:
        for p in write_outputs(report, timings, out_dir):
            print(p, file=sys.stderr)
    else:
        sys.stdout.write(dumps(report))
    return EXIT_OK if succeeded(report) else EXIT_ALL_FAILED


def cmd_synth(args) -> int:
    spec = load_spec(args.spec)
    traj, cont = generate(spec, args.horizon)
    labels = [f"ch{i}" for i in range(traj.dim)]
    write_matrix_csv(args.output, traj.values, labels)
    oracle = args.oracle_output
    if oracle is None:
        stem = args.output[:-4] if args.output.endswith(".csv") else args.output
        oracle = stem + ".oracle.csv"
    write_matrix_csv(oracle, cont, labels)
    print(f"wrote {args.output} and {oracle}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmdd", description="Exact DMD with delay embedding for short-term forecasting."
    )
    parser.add_argument("--version", action="version", version=f"dmdd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    num = argparse.ArgumentParser(add_help=False)
    num.add_argument("--rank-tol", type=float, default=FitOptions.rank_tol)
    num.add_argument("--zero-eig-tol", type=float, default=FitOptions.zero_eig_tol)

    p = sub.add_parser("fit", parents=[num], help="fit a (delayed) DMD model to a CSV file")
    p.add_argument("input")
    p.add_argument("--delays", "-d", type=int, default=0)
    p.add_argument("--input-frames", type=int, help="use only the first N frames")
    p.add_argument("--sample-rate", type=float, default=50.0, help="Hz (default 50)")
    p.add_argument("--output", "-o", required=True, help="model JSON path")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("forecast", help="forecast frames past the end of the fitted data")
    p.add_argument("model")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--ground-truth", help="CSV of the frames that actually followed")
    p.add_argument("--average-blocks", action="store_true",
                   help="average the overlapping estimates of each frame")
    p.add_argument("--output", "-o", help="forecast CSV path (default stdout)")
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("reconstruct", help="model estimate of frames 2..n")
    p.add_argument("model")
    p.add_argument("--ground-truth", help="CSV of the fitted data, to score the reconstruction")
    p.add_argument("--output", "-o", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("benchmark", help="run a reconstruction/anticipation grid")
    p.add_argument("config_file", nargs="?")
    p.add_argument("--config", dest="config_flag")
    p.add_argument("--input-frames", type=int, nargs="+", help="override input_lens")
    p.add_argument("--output", "-o", help="output directory (overrides output_dir)")
    p.add_argument("--jobs", "-j", type=int, default=1)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("synth", help="generate a synthetic trajectory from a spec file")
    p.add_argument("spec")
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--horizon", type=int, default=20, help="oracle continuation length")
    p.add_argument("--oracle-output")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "benchmark":
        args.config = args.config_flag or args.config_file
        if not args.config:
            parser.error("benchmark needs a config file (positional or --config)")
    try:
        return args.func(args)
    except DmddError as exc:
        print(f"dmdd {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"dmdd {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"dmdd {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
