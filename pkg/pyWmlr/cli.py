"""
Copyright 2026 pyWmlr contributors

WMLR library - Command line front end

Exit codes: 0 success, 1 usage error, 2 data error, 3 convergence failure.
"""


import argparse
import dataclasses
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence
from ._config import RunConfig, build_config
from ._pipeline import (CLEANED_FILE, DATA_FILE, PREDICTIONS_FILE, VERDICTS_FILE, clean_stage, detect_stage,
                        evaluate_stage, predict_stage, report_path, run_pipeline, synth_stage, train_stage)
from ._synthetic import SynthConfig
from .errors import DidNotConverge, WmlrError
from .types import Algorithm, AltitudeSource, ExitCode, ReportFormat, SubsetMode, WeightingMode

PROG = "pywmlr"


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors with exit code 1"""
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ExitCode.USAGE_ERROR.value, f"{self.prog}: error: {message}\n")


def _field_list(text: str) -> List[str]:
    return [name.strip() for name in text.split(",") if name.strip()]


def _common_options() -> argparse.ArgumentParser:
    parent = _ArgumentParser(add_help=False)
    group = parent.add_mutually_exclusive_group()
    group.add_argument("-v", "--verbose", action="store_true", help="Log debug detail.")
    group.add_argument("-q", "--quiet", action="store_true", help="Log warnings and errors only.")
    parent.add_argument("--config", help="key = value settings file; explicit flags win.")
    return parent


def _synth_options() -> argparse.ArgumentParser:
    parent = _ArgumentParser(add_help=False)
    parent.add_argument("--devices", type=int, dest="n_devices", help="Number of devices.")
    parent.add_argument("--points", type=int, dest="points_per_device", help="Records per device.")
    parent.add_argument("--outlier-fraction", type=float, help="Share of records turned into outliers.")
    parent.add_argument("--outlier-offset", type=float, help="Altitude offset of outliers (m).")
    parent.add_argument("--altitude-noise", type=float, dest="altitude_noise_sd", help="Altitude noise sd (m).")
    parent.add_argument("--pressure-noise", type=float, dest="pressure_noise_sd", help="Pressure noise sd (hPa).")
    parent.add_argument("--device-bias", type=float, dest="device_pressure_bias_sd",
                        help="Per-device pressure bias sd (hPa).")
    return parent


def _model_options() -> argparse.ArgumentParser:
    parent = _ArgumentParser(add_help=False)
    parent.add_argument("--seed", type=int, help="Seed of the split, subsets and SVM (default 20181005).")
    parent.add_argument("--lambda", type=float, dest="lam", help="Group-l1 weight (default 1e-3).")
    parent.add_argument("--delta", type=float, help="Quantization step in meters (default 4).")
    parent.add_argument("--r", type=int, help="Features per ensemble subset (default 4).")
    parent.add_argument("--L", type=int, dest="L", help="Ensemble size (default C(5, r)).")
    parent.add_argument("--subset-mode", type=SubsetMode, metavar="{enumerate,random}",
                        help="How ensemble subsets are chosen.")
    parent.add_argument("--train-fraction", type=float, help="Training share of the inliers (default 0.7).")
    parent.add_argument("--weighting", type=WeightingMode, metavar="{paper,inverse}",
                        help="Ensemble weights proportional to the error or to its inverse.")
    parent.add_argument("--window", type=float, help="Trace window in seconds (default 3600).")
    parent.add_argument("--monitored", type=_field_list, help="Comma separated 3-sigma fields.")
    parent.add_argument("--tol-per-sample", type=float,
                        help="Solver stops when the gradient-mapping norm over N drops below this (default 1e-6).")
    parent.add_argument("--max-iters", type=int, help="Solver iteration limit (default 5000).")
    parent.add_argument("--no-accelerate", dest="accelerate", action="store_const", const=False,
                        help="Plain proximal gradient steps.")
    parent.add_argument("--strict-convergence", dest="strict", action="store_const", const=True,
                        help="Fail with exit code 3 when a solver run does not converge.")
    parent.add_argument("--no-intercept", dest="fit_intercept", action="store_const", const=False,
                        help="Train softmax models without class intercepts.")
    parent.add_argument("--minmax", action="store_const", const=True, help="Rescale standardized features to [0, 1].")
    parent.add_argument("--svm-c", type=float, help="SVM regularization constant (default 1).")
    parent.add_argument("--svm-epochs", type=int, help="SVM passes over the data (default 20).")
    parent.add_argument("--workers", type=int, help="Threads for detection and ensemble training.")
    return parent


def _report_options() -> argparse.ArgumentParser:
    parent = _ArgumentParser(add_help=False)
    parent.add_argument("--altitude-source", type=AltitudeSource, metavar="{ground_truth,observed}",
                        help="Reference altitude of the ensemble weights (default ground_truth).")
    parent.add_argument("--format", type=ReportFormat, metavar="{csv,text}", dest="report_format",
                        help="Report format (default csv).")
    return parent


def _algorithms(text: str) -> List[Algorithm]:
    if text == "all":
        return Algorithm.all()
    return [Algorithm(text)]


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per pipeline stage"""
    common, synth, model, report = _common_options(), _synth_options(), _model_options(), _report_options()
    parser = _ArgumentParser(prog=PROG, description="Altitude outlier correction with weighted softmax ensembles.")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    sub = commands.add_parser("synth", parents=[common, synth], help="Generate a synthetic dataset.")
    sub.add_argument("--out", default=DATA_FILE, help="Dataset CSV to write.")
    sub.add_argument("--seed", type=int, help="Generator seed (default 20181005).")

    sub = commands.add_parser("clean", parents=[common], help="Drop incomplete records and apply the 3-sigma rule.")
    sub.add_argument("--in", dest="input", required=True, help="Dataset CSV.")
    sub.add_argument("--out", default=CLEANED_FILE, help="Cleaned CSV to write.")
    sub.add_argument("--monitored", type=_field_list, help="Comma separated 3-sigma fields.")

    sub = commands.add_parser("detect", parents=[common], help="Flag position outliers per trace.")
    sub.add_argument("--in", dest="input", required=True, help="Cleaned dataset CSV.")
    sub.add_argument("--out", default=VERDICTS_FILE, help="Verdict CSV to write.")
    sub.add_argument("--window", type=float, help="Trace window in seconds (default 3600).")
    sub.add_argument("--workers", type=int, help="Detection threads.")

    sub = commands.add_parser("train", parents=[common, model], help="Fit MLR, WMLR and SVM models.")
    sub.add_argument("--in", dest="input", required=True, help="Cleaned dataset CSV.")
    sub.add_argument("--verdicts", help="Verdict CSV; flagged records are not used.")
    sub.add_argument("--out-dir", default=".", help="Directory for split.csv and models/.")
    sub.add_argument("--algo", type=_algorithms, default=Algorithm.all(), metavar="{mlr,wmlr,svm,all}",
                     help="Models to train (default all).")

    sub = commands.add_parser("predict", parents=[common, report], help="Predict test-point altitudes.")
    sub.add_argument("--in", dest="input", required=True, help="Cleaned dataset CSV.")
    sub.add_argument("--model-dir", default=".", help="Directory written by train.")
    sub.add_argument("--out", default=PREDICTIONS_FILE, help="Predictions CSV to write.")
    sub.add_argument("--algo", type=_algorithms, metavar="{mlr,wmlr,svm,all}",
                     help="Models to use (default every model present).")
    sub.add_argument("--verdicts", help="Verdict CSV of the outliers to correct.")
    sub.add_argument("--corrected", help="Corrected dataset CSV to write (needs --verdicts).")

    sub = commands.add_parser("evaluate", parents=[common, report], help="Error statistics of a predictions file.")
    sub.add_argument("--in", dest="input", default=PREDICTIONS_FILE, help="Predictions CSV.")
    sub.add_argument("--out", help="Report to write (default report.csv or report.txt).")

    sub = commands.add_parser("pipeline", parents=[common, synth, model, report], help="Run every stage.")
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument("--synth", action="store_true", help="Generate the input dataset.")
    source.add_argument("--input", help="Dataset CSV.")
    sub.add_argument("--out-dir", default=".", help="Directory for all artifacts.")
    return parser


_CONFIG_KEYS = [field.name for field in dataclasses.fields(RunConfig)]
_SYNTH_KEYS = ["n_devices", "points_per_device", "outlier_fraction", "outlier_offset", "altitude_noise_sd",
               "pressure_noise_sd", "device_pressure_bias_sd"]


def _run_config(args: argparse.Namespace) -> RunConfig:
    overrides = {key: getattr(args, key) for key in _CONFIG_KEYS if hasattr(args, key)}
    return build_config(args.config, **overrides)


def _synth_config(args: argparse.Namespace, seed: Optional[int]) -> SynthConfig:
    settings = {key: getattr(args, key) for key in _SYNTH_KEYS if getattr(args, key, None) is not None}
    if seed is not None:
        settings["seed"] = seed
    return SynthConfig(**settings)


def _synth(args, config: RunConfig) -> List[str]:
    return synth_stage(args.out, _synth_config(args, args.seed if args.seed is not None else config.seed))


def _clean(args, config: RunConfig) -> List[str]:
    return clean_stage(args.input, args.out, config.monitored)


def _detect(args, config: RunConfig) -> List[str]:
    return detect_stage(args.input, args.out, config.window, config.workers)


def _train(args, config: RunConfig) -> List[str]:
    return train_stage(args.input, args.out_dir, config, args.verdicts, args.algo)


def _predict(args, config: RunConfig) -> List[str]:
    if args.corrected and not args.verdicts:
        raise ValueError("--corrected needs --verdicts")
    return predict_stage(args.input, args.model_dir, args.out, config.altitude_source, args.algo, args.verdicts,
                         args.corrected)


def _evaluate(args, config: RunConfig) -> List[str]:
    out = args.out or report_path(".", config.report_format)
    return evaluate_stage(args.input, out, config.report_format, config.altitude_source)


def _pipeline(args, config: RunConfig) -> List[str]:
    if args.synth:
        return run_pipeline(config, args.out_dir, synth_config=_synth_config(args, config.seed))
    return run_pipeline(config, args.out_dir, input_path=args.input)


_HANDLERS: Dict[str, Callable[[argparse.Namespace, RunConfig], List[str]]] = {
    "synth": _synth,
    "clean": _clean,
    "detect": _detect,
    "train": _train,
    "predict": _predict,
    "evaluate": _evaluate,
    "pipeline": _pipeline,
}


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)

    try:
        config = _run_config(args)
    except FileNotFoundError as err:
        print(f"{PROG} {args.command}: [config] {err}", file=sys.stderr)
        return ExitCode.USAGE_ERROR.value
    except ValueError as err:
        print(f"{PROG} {args.command}: [config] {err}", file=sys.stderr)
        return ExitCode.USAGE_ERROR.value

    try:
        written = _HANDLERS[args.command](args, config)
    except DidNotConverge as err:
        print(f"{PROG} {args.command}: {err}", file=sys.stderr)
        return ExitCode.CONVERGENCE_FAILURE.value
    except WmlrError as err:
        print(f"{PROG} {args.command}: {err}", file=sys.stderr)
        return ExitCode.DATA_ERROR.value
    except (FileNotFoundError, OSError, ValueError, KeyError) as err:
        print(f"{PROG} {args.command}: [{args.command}] {type(err).__name__}: {err}", file=sys.stderr)
        return ExitCode.DATA_ERROR.value

    for path in written:
        print(path)
    return ExitCode.SUCCESS.value


if __name__ == "__main__":
    sys.exit(main())
