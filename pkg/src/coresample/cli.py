"""Command-line front end.

Thin adapters only: every subcommand parses flags, loads data, calls the
library, and writes the result. Exit codes: 0 success, 1 usage error,
2 data error, 3 I/O error. Diagnostics go to stderr; data goes to the
output file or stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .data_io import CsvSchema, load_csv, make_synthetic, standardize, write_csv
from .errors import UsageError, ValidationError
from .evaluation import (
    borderline_experiment,
    compression_sweep,
    majority_label,
    minority_label,
    report_to_json,
)
from .geometry import partition_dataset
from .resampling import (
    BALANCE_TO_MAJORITY,
    ResampleConfig,
    downsample_core,
    hybrid_resample,
    oversample_border,
)

_DEFAULTS = ResampleConfig()


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); route to exit code 1
        raise UsageError(f"{message}\n{self.format_usage()}")


def _parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid norm order {text!r}") from None


def _parse_target(text: str):
    if text == BALANCE_TO_MAJORITY or text == "balance":
        return BALANCE_TO_MAJORITY
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"oversample target must be an integer or {BALANCE_TO_MAJORITY!r}"
        ) from None


def _parse_levels(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid levels list {text!r}") from None


def _add_input_flags(sub) -> None:
    sub.add_argument("--input", required=True, help="input dataset CSV")
    sub.add_argument("--label", default="label", help="label column name or index")
    sub.add_argument("--delimiter", default=",")
    sub.add_argument("--no-header", action="store_true", help="CSV has no header row")
    sub.add_argument("--na-policy", choices=("error", "drop-row"), default="error")


def _add_config_flags(sub) -> None:
    sub.add_argument("--k", type=int, default=_DEFAULTS.k)
    sub.add_argument("--p", type=_parse_p, default=_DEFAULTS.p, help="norm order (or 'inf')")
    sub.add_argument("--alpha", type=float, default=_DEFAULTS.alpha)
    sub.add_argument("--compression", type=float, default=_DEFAULTS.compression)
    sub.add_argument("--oversample-target", type=_parse_target, default=_DEFAULTS.oversample_target)
    sub.add_argument("--strategy", choices=("interpolate", "duplicate"), default=_DEFAULTS.strategy)
    sub.add_argument("--removal-policy", choices=("random", "densest-first"), default=_DEFAULTS.removal_policy)
    sub.add_argument("--seed", type=int, default=_DEFAULTS.seed)
    sub.add_argument("--normalize", choices=("off", "zscore"), default=_DEFAULTS.normalize)
    sub.add_argument("--lenient", action="store_true", help="degenerate classes become all-core")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coresample", description=__doc__)
    parser.add_argument("--version", action="version", version=f"coresample {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", help="generate a synthetic dataset CSV")
    synth.add_argument("--generator", choices=("two-gaussians", "donut"), required=True)
    synth.add_argument("--n-maj", type=int, default=900)
    synth.add_argument("--n-min", type=int, default=100)
    synth.add_argument("--separation", type=float, default=4.0)
    synth.add_argument("--sigma", type=float, default=0.5)
    synth.add_argument("--dims", type=int, default=2)
    synth.add_argument("--n", type=int, default=500)
    synth.add_argument("--inner-r", type=float, default=1.0)
    synth.add_argument("--outer-r", type=float, default=2.0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--output", default=None, help="output CSV (default stdout)")

    partition = commands.add_parser("partition", help="core/border split per class")
    _add_input_flags(partition)
    _add_config_flags(partition)
    partition.add_argument("--output", default=None, help="output JSON (default stdout)")

    for name, help_text in (
        ("oversample", "grow one class from its border points"),
        ("downsample", "prune one class's core points"),
        ("hybrid", "downsample majority core, oversample minority border"),
    ):
        sub = commands.add_parser(name, help=help_text)
        _add_input_flags(sub)
        _add_config_flags(sub)
        if name != "hybrid":
            sub.add_argument("--class-label", default=None, help="target class (default: minority for oversample, majority for downsample)")
        sub.add_argument("--provenance", action="store_true", help="add a provenance column")
        sub.add_argument("--output", default=None, help="output CSV (default stdout)")

    experiment = commands.add_parser("experiment", help="baseline vs borderline oversampling")
    _add_input_flags(experiment)
    _add_config_flags(experiment)
    experiment.add_argument("--n-seeds", type=int, default=20)
    experiment.add_argument("--test-fraction", type=float, default=0.2)
    experiment.add_argument("--name", default=None, help="dataset name for the report")
    experiment.add_argument("--format", choices=("json", "csv"), default="json")
    experiment.add_argument("--output", default=None)

    sweep = commands.add_parser("sweep", help="accuracy vs compression sweep")
    _add_input_flags(sweep)
    _add_config_flags(sweep)
    sweep.add_argument("--levels", type=_parse_levels, default=[0.0, 0.25, 0.5])
    sweep.add_argument("--test-fraction", type=float, default=0.2)
    sweep.add_argument("--format", choices=("json", "csv"), default="json")
    sweep.add_argument("--output", default=None)

    return parser


def _schema(args) -> CsvSchema:
    label: str | int = args.label
    if isinstance(label, str):
        try:
            label = int(label)
        except ValueError:
            pass
    if args.no_header and isinstance(label, str):
        raise UsageError("--no-header requires --label to be a column index")
    return CsvSchema(
        label_column=label,
        delimiter=args.delimiter,
        has_header=not args.no_header,
        na_policy=args.na_policy,
    )


def _config(args) -> ResampleConfig:
    try:
        return ResampleConfig(
            k=args.k,
            p=args.p,
            alpha=args.alpha,
            compression=args.compression,
            oversample_target=args.oversample_target,
            strategy=args.strategy,
            removal_policy=args.removal_policy,
            seed=args.seed,
            lenient=args.lenient,
            normalize=args.normalize,
        )
    except ValidationError as exc:  # bad flag values are usage errors
        raise UsageError(str(exc)) from None


def _emit_text(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _emit_csv(result, output: str | None, include_provenance: bool) -> None:
    if output is None:
        write_csv(result, sys.stdout, include_provenance=include_provenance)
    else:
        write_csv(result, output, include_provenance=include_provenance)


def _metric_view(dataset, config):
    if config.normalize == "zscore":
        return standardize(dataset, "zscore")[0]
    return None


def _cmd_synth(args) -> None:
    if args.generator == "two-gaussians":
        ds = make_synthetic(
            "two-gaussians",
            seed=args.seed,
            n_maj=args.n_maj,
            n_min=args.n_min,
            separation=args.separation,
            sigma=args.sigma,
            d=args.dims,
        )
    else:
        ds = make_synthetic(
            "donut", seed=args.seed, n=args.n, inner_r=args.inner_r, outer_r=args.outer_r
        )
    _emit_csv(ds, args.output, include_provenance=False)


def _cmd_partition(args) -> None:
    config = _config(args)
    dataset = load_csv(args.input, _schema(args))
    metric = _metric_view(dataset, config)
    partition = partition_dataset(metric if metric is not None else dataset, config)
    classes = [
        {
            "label": label,
            "threshold": None if math.isinf(entry.threshold) else entry.threshold,
            "alpha": entry.alpha,
            "n_core": len(entry.core_ids),
            "n_border": len(entry.border_ids),
            "core_ids": sorted(entry.core_ids),
            "border_ids": sorted(entry.border_ids),
        }
        for label, entry in sorted(partition.classes.items())
    ]
    payload = {
        "command": "partition",
        "version": __version__,
        "config": {
            "k": config.k,
            "p": "inf" if math.isinf(config.p) else config.p,
            "alpha": config.alpha,
            "normalize": config.normalize,
            "lenient": config.lenient,
        },
        "classes": classes,
    }
    _emit_text(json.dumps(payload, indent=2, allow_nan=False) + "\n", args.output)


def _cmd_oversample(args) -> None:
    config = _config(args)
    dataset = load_csv(args.input, _schema(args))
    metric = _metric_view(dataset, config)
    partition = partition_dataset(metric if metric is not None else dataset, config)
    label = args.class_label if args.class_label is not None else minority_label(dataset)
    result = oversample_border(
        dataset, partition, config, label, metric_dataset=metric
    )
    _emit_csv(result, args.output, include_provenance=args.provenance)


def _cmd_downsample(args) -> None:
    config = _config(args)
    dataset = load_csv(args.input, _schema(args))
    metric = _metric_view(dataset, config)
    partition = partition_dataset(metric if metric is not None else dataset, config)
    label = args.class_label if args.class_label is not None else majority_label(dataset)
    result = downsample_core(dataset, partition, config, label)
    _emit_csv(result, args.output, include_provenance=args.provenance)


def _cmd_hybrid(args) -> None:
    config = _config(args)
    dataset = load_csv(args.input, _schema(args))
    result = hybrid_resample(dataset, config, metric_dataset=_metric_view(dataset, config))
    _emit_csv(result, args.output, include_provenance=args.provenance)


def _report_csv(report: dict) -> str:
    config_pairs = " ".join(f"{key}={value}" for key, value in report["config"].items())
    lines = [f"# experiment={report['experiment']} {config_pairs}"]
    rows = report["rows"]
    if report["experiment"] == "borderline":
        lines.append("seed,baseline_f1,borderline_f1,improvement")
        for row in rows:
            lines.append(
                f"{row['seed']},{row['baseline_f1']},{row['borderline_f1']},{row['improvement']}"
            )
    else:
        lines.append("compression,n_train_after,accuracy,precision,recall,f1")
        for row in rows:
            m = row["metrics"]["knn"]
            lines.append(
                f"{row['compression']},{row['n_train_after']},"
                f"{m['accuracy']},{m['precision']},{m['recall']},{m['f1']}"
            )
    return "\n".join(lines) + "\n"


def _emit_report(report: dict, fmt: str, output: str | None) -> None:
    if fmt == "json":
        _emit_text(json.dumps(report, indent=2, allow_nan=False) + "\n", output)
    else:
        _emit_text(_report_csv(report), output)


def _cmd_experiment(args) -> None:
    config = _config(args)
    dataset = load_csv(args.input, _schema(args))
    name = args.name if args.name is not None else Path(args.input).stem
    record = borderline_experiment(
        dataset, config, args.n_seeds, dataset_name=name, test_fraction=args.test_fraction
    )
    report = report_to_json(record, config, test_fraction=args.test_fraction)
    _emit_report(report, args.format, args.output)
    print(
        f"baseline_f1={record.baseline_f1:.6f} borderline_f1={record.borderline_f1:.6f} "
        f"improvement={record.improvement:+.6f} wins={record.borderline_wins}/{len(record.seeds)}",
        file=sys.stderr,
    )


def _cmd_sweep(args) -> None:
    config = _config(args)
    dataset = load_csv(args.input, _schema(args))
    rows = compression_sweep(
        dataset, args.levels, config, test_fraction=args.test_fraction
    )
    report = report_to_json(
        rows, config, test_fraction=args.test_fraction, levels=args.levels
    )
    _emit_report(report, args.format, args.output)


_COMMANDS = {
    "synth": _cmd_synth,
    "partition": _cmd_partition,
    "oversample": _cmd_oversample,
    "downsample": _cmd_downsample,
    "hybrid": _cmd_hybrid,
    "experiment": _cmd_experiment,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except SystemExit as exc:  # argparse --help / --version
        code = exc.code
        return int(code) if isinstance(code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
