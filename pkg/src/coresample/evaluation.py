"""Reference k-NN classifier, binary metrics, and the two experiment runners.

The runners never touch the test split with anything but prediction:
resampling, partitioning, and standardization statistics all come from the
training split alone, and a guard asserts the splits stay disjoint.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .data_io import standardize
from .dataset import Dataset
from .errors import NoBorderPointsError, ValidationError
from .geometry import partition_dataset
from .resampling import (
    BALANCE_TO_MAJORITY,
    ResampleConfig,
    downsample_core,
    oversample_border,
    oversample_pool,
)

__all__ = [
    "MetricsReport",
    "SweepRow",
    "SeedOutcome",
    "ExperimentRecord",
    "stratified_split",
    "knn_predict",
    "classification_metrics",
    "borderline_experiment",
    "compression_sweep",
    "majority_label",
    "minority_label",
    "report_to_json",
]


@dataclass(frozen=True)
class MetricsReport:
    """Binary confusion counts and the derived rates for one prediction run."""

    tp: int
    fp: int
    fn: int
    tn: int
    accuracy: float
    precision: float
    recall: float
    f1: float
    positive_label: str


@dataclass(frozen=True)
class SweepRow:
    """One compression level of a sweep: metrics per classifier name."""

    compression: float
    n_train_after: int
    metrics: Mapping[str, MetricsReport]


@dataclass(frozen=True)
class SeedOutcome:
    seed: int
    baseline_f1: float
    borderline_f1: float


@dataclass(frozen=True)
class ExperimentRecord:
    """Borderline-vs-baseline oversampling comparison aggregated over seeds."""

    dataset_name: str
    baseline_f1: float
    borderline_f1: float
    improvement: float
    seeds: tuple[int, ...]
    per_seed: tuple[SeedOutcome, ...]
    config: ResampleConfig

    @property
    def borderline_wins(self) -> int:
        return sum(1 for s in self.per_seed if s.borderline_f1 > s.baseline_f1)


def majority_label(dataset: Dataset) -> str:
    """Label with the most rows; ties go to the first label in sort order."""
    counts = dataset.class_counts()
    return max(sorted(counts), key=lambda lab: counts[lab])


def minority_label(dataset: Dataset) -> str:
    """Label with the fewest rows; ties go to the last label in sort order."""
    counts = dataset.class_counts()
    return min(sorted(counts, reverse=True), key=lambda lab: counts[lab])


def stratified_split(
    dataset: Dataset, test_fraction: float, seed: int
) -> tuple[Dataset, Dataset]:
    """Seeded per-class proportional split into (train, test).

    Each class contributes round(m * test_fraction) test rows, capped at
    m - 1 so every class keeps at least one training row.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValidationError(f"test_fraction must be in (0, 1), got {test_fraction}")
    singletons = [lab for lab in dataset.classes if dataset.class_count(lab) < 2]
    if singletons:
        raise ValidationError(
            f"classes with a single row cannot be split: {', '.join(map(repr, singletons))}"
        )
    rng = np.random.default_rng(seed)
    test_positions: list[np.ndarray] = []
    train_positions: list[np.ndarray] = []
    for label in dataset.classes:
        positions = dataset.class_positions(label)
        m = len(positions)
        n_test = min(int(math.floor(m * test_fraction + 0.5)), m - 1)
        perm = rng.permutation(positions)
        test_positions.append(perm[:n_test])
        train_positions.append(perm[n_test:])
    train_idx = np.sort(np.concatenate(train_positions)).astype(np.int64)
    test_idx = np.sort(np.concatenate(test_positions)).astype(np.int64)
    if test_idx.size == 0:
        raise ValidationError("test split is empty; raise test_fraction")
    return dataset.take(train_idx), dataset.take(test_idx)


def knn_predict(train: Dataset, queries, k: int, p: float = 2.0) -> np.ndarray:
    """Majority label of each query's k nearest training rows.

    Distance ties are broken by ascending row_id; a tied vote goes to the
    tied label seen nearest first.
    """
    if not 1 <= k <= train.n_rows:
        raise ValidationError(f"k={k} out of range for {train.n_rows} training rows")
    q = queries.features if isinstance(queries, Dataset) else np.asarray(queries, float)
    if q.ndim != 2 or q.shape[1] != train.n_features:
        raise ValidationError(
            f"queries must be 2-D with {train.n_features} features"
        )
    order = np.argsort(train.row_ids, kind="stable")
    feats = train.features[order]
    classes, codes = np.unique(train.labels[order], return_inverse=True)
    votes = _kernels.knn_label_votes(feats, codes.astype(np.int64), len(classes), q, k, p)
    return classes[votes]


def classification_metrics(predicted, truth, positive_label: str) -> MetricsReport:
    """Binary confusion counts against one positive label.

    Zero-denominator precision, recall, and F1 are defined as 0.
    """
    pred = np.asarray(predicted, dtype=np.str_)
    true = np.asarray(truth, dtype=np.str_)
    if pred.shape != true.shape or pred.ndim != 1 or pred.size == 0:
        raise ValidationError("predicted and truth must be equal-length, non-empty")
    pos = str(positive_label)
    pred_pos = pred == pos
    true_pos = true == pos
    tp = int(np.sum(pred_pos & true_pos))
    fp = int(np.sum(pred_pos & ~true_pos))
    fn = int(np.sum(~pred_pos & true_pos))
    tn = int(np.sum(~pred_pos & ~true_pos))
    accuracy = (tp + tn) / pred.size
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return MetricsReport(tp, fp, fn, tn, accuracy, precision, recall, f1, pos)


def _assert_no_leakage(train: Dataset, test: Dataset) -> None:
    overlap = set(train.row_ids.tolist()) & set(test.row_ids.tolist())
    if overlap:
        raise AssertionError(f"train/test leak: shared row_ids {sorted(overlap)[:5]}")


def _prepare_split(dataset, config, test_fraction, seed):
    train, test = stratified_split(dataset, test_fraction, seed)
    _assert_no_leakage(train, test)
    if config.normalize == "zscore":
        train, stats = standardize(train, "zscore")
        test = stats.apply(test)
    return train, test


def _borderline_arm(
    train: Dataset, config: ResampleConfig, minority: str, majority: str, target: int
) -> Dataset:
    """Partition, optionally downsample the majority core, then oversample
    the minority border. Falls back to duplicating core points when the
    border is empty, which makes the arm coincide with a duplicate baseline.
    """
    partition = partition_dataset(train, config)
    rng = np.random.default_rng(config.seed)
    current = train
    if config.compression > 0:
        down = downsample_core(current, partition, config, majority, rng=rng)
        current = down.dataset
        target = current.class_count(majority)
    try:
        grown = oversample_border(
            current, partition, config, minority, target=target, rng=rng
        )
    except NoBorderPointsError:
        warnings.warn(
            f"class {minority!r} has no border points; duplicating core points instead"
        )
        fallback = replace(config, strategy="duplicate")
        grown = oversample_pool(
            current,
            partition[minority].core_ids,
            fallback,
            minority,
            target=target,
            rng=rng,
        )
    return grown.dataset


def borderline_experiment(
    dataset: Dataset,
    config: ResampleConfig,
    n_seeds: int = 20,
    *,
    dataset_name: str = "dataset",
    test_fraction: float = 0.2,
) -> ExperimentRecord:
    """Compare whole-minority oversampling against border-only oversampling.

    Both arms share the synthesis strategy, target count, and classifier, so
    the candidate pool is the only difference. Seeds config.seed ..
    config.seed + n_seeds - 1 each drive one split/resample/evaluate round;
    F1 is scored on the minority class.
    """
    if len(dataset.classes) != 2:
        raise ValidationError("borderline experiment needs a binary dataset")
    if n_seeds < 1:
        raise ValidationError("n_seeds must be >= 1")
    positive = minority_label(dataset)
    outcomes = []
    for seed in range(config.seed, config.seed + n_seeds):
        cfg = replace(config, seed=seed)
        train, test = _prepare_split(dataset, cfg, test_fraction, seed)
        majority = majority_label(train)
        minority = next(lab for lab in train.classes if lab != majority)
        target = (
            train.class_count(majority)
            if cfg.oversample_target == BALANCE_TO_MAJORITY
            else int(cfg.oversample_target)
        )

        base_train = oversample_pool(
            train,
            train.row_ids[train.class_positions(minority)],
            cfg,
            minority,
            target=target,
            rng=np.random.default_rng(seed),
        ).dataset
        border_train = _borderline_arm(train, cfg, minority, majority, target)

        base_pred = knn_predict(base_train, test.features, cfg.k, cfg.p)
        border_pred = knn_predict(border_train, test.features, cfg.k, cfg.p)
        outcomes.append(
            SeedOutcome(
                seed,
                classification_metrics(base_pred, test.labels, positive).f1,
                classification_metrics(border_pred, test.labels, positive).f1,
            )
        )

    baseline = sum(o.baseline_f1 for o in outcomes) / len(outcomes)
    borderline = sum(o.borderline_f1 for o in outcomes) / len(outcomes)
    return ExperimentRecord(
        dataset_name,
        baseline,
        borderline,
        borderline - baseline,
        tuple(o.seed for o in outcomes),
        tuple(outcomes),
        config,
    )


# majority/minority imbalance ratio above which a sweep compresses only the
# majority class; balanced data compresses both classes
_SWEEP_IMBALANCE_CUTOFF = 1.5


def compression_sweep(
    dataset: Dataset,
    levels: Sequence[float],
    config: ResampleConfig,
    *,
    test_fraction: float = 0.2,
) -> list[SweepRow]:
    """Core-aware downsampling sweep: train at each compression level, score
    the untouched test split.

    Levels must be ascending, start at 0, and stay within [0, 1]. Roughly
    balanced training data (imbalance ratio <= 1.5) is compressed in both
    classes; clearly imbalanced data only in the majority class.
    """
    levels = [float(c) for c in levels]
    if not levels or levels[0] != 0.0:
        raise ValidationError("levels must be non-empty and start at 0")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValidationError("levels must be strictly ascending")
    if levels[-1] > 1.0 or levels[0] < 0.0:
        raise ValidationError("levels must lie within [0, 1]")

    train, test = _prepare_split(dataset, config, test_fraction, config.seed)
    partition = partition_dataset(train, config)
    positive = minority_label(train)
    majority = majority_label(train)
    counts = train.class_counts()
    ratio = max(counts.values()) / min(counts.values())
    targets = (
        [majority] if ratio > _SWEEP_IMBALANCE_CUTOFF else list(train.classes)
    )

    rows = []
    for level in levels:
        cfg = replace(config, compression=level)
        rng = np.random.default_rng(config.seed)
        current = train
        for label in targets:
            current = downsample_core(current, partition, cfg, label, rng=rng).dataset
        predicted = knn_predict(current, test.features, config.k, config.p)
        report = classification_metrics(predicted, test.labels, positive)
        rows.append(SweepRow(level, current.n_rows, {"knn": report}))
    return rows


def _json_float(value: float):
    return round(float(value), 6)


def _json_p(p: float):
    return "inf" if math.isinf(p) else p


def _config_snapshot(config: ResampleConfig, **extra) -> dict:
    snap = {
        "k": config.k,
        "p": _json_p(config.p),
        "alpha": config.alpha,
        "compression": config.compression,
        "oversample_target": config.oversample_target,
        "strategy": config.strategy,
        "removal_policy": config.removal_policy,
        "seed": config.seed,
        "lenient": config.lenient,
        "normalize": config.normalize,
    }
    snap.update(extra)
    return snap


def report_to_json(result, config: ResampleConfig, **config_extra) -> dict:
    """Fixed-shape report object: experiment kind, config snapshot, rows.

    Floats are rounded to 6 decimals; full precision stays on the Python
    records.
    """
    if isinstance(result, ExperimentRecord):
        rows = [
            {
                "seed": o.seed,
                "baseline_f1": _json_float(o.baseline_f1),
                "borderline_f1": _json_float(o.borderline_f1),
                "improvement": _json_float(o.borderline_f1 - o.baseline_f1),
            }
            for o in result.per_seed
        ]
        return {
            "experiment": "borderline",
            "config": _config_snapshot(
                config, dataset=result.dataset_name, n_seeds=len(result.seeds), **config_extra
            ),
            "rows": rows,
        }
    rows = []
    for row in result:
        entry = {"compression": _json_float(row.compression), "n_train_after": row.n_train_after}
        entry["metrics"] = {
            name: {
                "accuracy": _json_float(m.accuracy),
                "precision": _json_float(m.precision),
                "recall": _json_float(m.recall),
                "f1": _json_float(m.f1),
            }
            for name, m in row.metrics.items()
        }
        rows.append(entry)
    return {
        "experiment": "sweep",
        "config": _config_snapshot(config, **config_extra),
        "rows": rows,
    }
