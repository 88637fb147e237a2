"""Command-line entry point: ``kbnorm {run-experiment,test,generate}``.

Exit codes: 0 completed (including a rejecting verdict), 1 usage or parse
error, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import yaml

from .dataset import read_dataset, write_dataset
from .distributions import SeedScheme, parse_spec, sample
from .errors import (
    DegenerateNullError,
    DegenerateSampleError,
    InsufficientDataError,
    KBNormError,
    SingularCovarianceError,
)
from .experiment import ExperimentConfig, run_experiment
from .hz import hz_normality_test
from .kb import NullMode, kb_normality_test
from .kernels import KernelSpec

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2

log = logging.getLogger("kbnorm")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kbnorm", description="Kac-Bernstein and Henze-Zirkler normality tests.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run-experiment", help="run a Monte-Carlo power study from a YAML config")
    run.add_argument("config", help="YAML config file")
    run.add_argument("--seed", type=int, help="override master_seed")
    run.add_argument("--alpha", type=float, help="override alpha")
    run.add_argument("--workers", type=int, help="override worker process count")
    run.add_argument("--test", action="append", choices=("kb", "hz"), help="restrict tests (repeatable)")
    run.add_argument("--sigma", type=float, help="fixed kernel bandwidth instead of the median heuristic")
    run.add_argument("--out-dir", default=None, help="directory for report.csv and summary.csv")

    test = sub.add_parser("test", help="test a dataset file for multivariate normality")
    test.add_argument("path")
    test.add_argument("--test", choices=("kb", "hz"), default="kb")
    test.add_argument("--alpha", type=float, default=0.05)
    test.add_argument("--sigma", type=float, help="fixed kernel bandwidth (kb only)")
    test.add_argument("--null", choices=("gamma", "permutation"), default="gamma")
    test.add_argument("--shuffles", type=int, default=500)
    test.add_argument("--seed", type=int, help="seed for the permutation null")
    test.add_argument("--split-seed", type=int, help="shuffle rows with this seed before splitting (kb)")
    test.add_argument("--delimiter", help="field delimiter (auto-detected by default)")

    gen = sub.add_parser("generate", help="write a sample from a named distribution")
    gen.add_argument("spec", help="e.g. NormalStdIso, ChiSq(1), Beta(8,2)")
    gen.add_argument("-n", type=int, required=True, help="number of rows")
    gen.add_argument("-d", type=int, required=True, help="dimension")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--out", required=True)
    return parser


def load_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise UsageError(f"cannot parse config {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise UsageError(f"config {path} must be a mapping")
    return raw


def cmd_run_experiment(args) -> int:
    raw = load_config(args.config)
    output = raw.get("output") or {}
    overrides = {"master_seed": args.seed, "alpha": args.alpha, "workers": args.workers,
                 "tests": args.test, "kernel_sigma": args.sigma}
    raw.update({k: v for k, v in overrides.items() if v is not None})
    config = ExperimentConfig.from_mapping(raw)
    report = run_experiment(config)

    base = args.out_dir or os.path.dirname(os.path.abspath(args.config))
    report_path = os.path.join(base, output.get("report", "report.csv"))
    summary_path = os.path.join(base, output.get("summary", "summary.csv"))
    os.makedirs(os.path.dirname(report_path) or ".", exist_ok=True)
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(report.report_csv())
    with open(summary_path, "w", encoding="utf-8") as fh:
        fh.write(report.summary_csv())
    print(report.summary_csv(), end="")
    log.info("wrote %s and %s", report_path, summary_path)
    return EXIT_OK


INAPPLICABLE = (SingularCovarianceError, DegenerateSampleError, DegenerateNullError, InsufficientDataError)


def cmd_test(args) -> int:
    X = read_dataset(args.path, args.delimiter)
    record = {
        "path": args.path,
        "test": args.test,
        "rows": X.shape[0],
        "d": X.shape[1],
        "options": {
            "alpha": args.alpha,
            "sigma": args.sigma,
            "null": args.null,
            "shuffles": args.shuffles if args.null == "permutation" else None,
            "seed": args.seed,
            "split_seed": args.split_seed,
        },
    }
    try:
        if args.test == "kb":
            null = NullMode.permutation(args.shuffles, args.seed) if args.null == "permutation" else NullMode()
            kernel = KernelSpec(sigma=args.sigma)
            out = kb_normality_test(X, args.alpha, kernel, null, shuffle_seed=args.split_seed)
        else:
            out = hz_normality_test(X, args.alpha)
    except INAPPLICABLE as exc:
        record.update(status="inapplicable", reason=f"{type(exc).__name__}: {exc}")
    else:
        record.update(status="ok", **out.to_dict())
    print(json.dumps(record, indent=2))
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = parse_spec(args.spec)
    if args.n < 1 or args.d < 1:
        raise UsageError(f"n and d must be positive, got n={args.n}, d={args.d}")
    X = sample(spec, args.n, args.d, SeedScheme(args.seed).generator(spec.stable_key()))
    write_dataset(X, args.out)
    return EXIT_OK


COMMANDS = {"run-experiment": cmd_run_experiment, "test": cmd_test, "generate": cmd_generate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        print(f"kbnorm: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, KBNormError) as exc:
        print(f"kbnorm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
