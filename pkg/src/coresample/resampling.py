"""Border-aware oversampling, core-aware downsampling, and their hybrid.

All randomness flows through one numpy Generator seeded from the config,
consumed in a documented order, so identical inputs give byte-identical
results.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import _kernels
from .dataset import Dataset
from .errors import NoBorderPointsError, ValidationError
from .geometry import Partition, _check_norm_order, partition_dataset

__all__ = [
    "ResampleConfig",
    "ResampleResult",
    "oversample_border",
    "oversample_pool",
    "downsample_core",
    "hybrid_resample",
    "removal_count",
]

BALANCE_TO_MAJORITY = "balance-to-majority"

_STRATEGIES = ("interpolate", "duplicate")
_REMOVAL_POLICIES = ("random", "densest-first")
_NORMALIZE_MODES = ("off", "zscore")


@dataclass(frozen=True)
class ResampleConfig:
    """Every tunable in one place; CLI flags map onto these fields 1:1."""

    k: int = 5
    p: float = 2.0
    alpha: float = 80.0
    compression: float = 0.0
    oversample_target: str | int = BALANCE_TO_MAJORITY
    strategy: str = "interpolate"
    removal_policy: str = "random"
    seed: int = 0
    lenient: bool = False
    normalize: str = "zscore"

    def __post_init__(self):
        if int(self.k) < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        _check_norm_order(self.p)
        if not 0.0 <= self.alpha <= 100.0:
            raise ValidationError(f"alpha must be in [0, 100], got {self.alpha}")
        if not 0.0 <= self.compression <= 1.0:
            raise ValidationError(
                f"compression must be in [0, 1], got {self.compression}"
            )
        if self.strategy not in _STRATEGIES:
            raise ValidationError(f"unknown strategy {self.strategy!r}")
        if self.removal_policy not in _REMOVAL_POLICIES:
            raise ValidationError(f"unknown removal policy {self.removal_policy!r}")
        if self.normalize not in _NORMALIZE_MODES:
            raise ValidationError(f"unknown normalize mode {self.normalize!r}")
        if isinstance(self.oversample_target, str):
            if self.oversample_target != BALANCE_TO_MAJORITY:
                raise ValidationError(
                    f"oversample_target must be {BALANCE_TO_MAJORITY!r} or an integer"
                )
        elif int(self.oversample_target) < 1:
            raise ValidationError("explicit oversample target must be positive")
        if int(self.seed) < 0:
            raise ValidationError("seed must be a non-negative integer")


@dataclass(frozen=True)
class ResampleResult:
    """A resampled dataset plus full provenance of what changed.

    provenance holds one tag per output row ("original" or "synthetic");
    parents maps each synthetic row_id to (parent_a, parent_b, u) with the
    row equal to parent_a + u * (parent_b - parent_a); removed_ids lists
    dropped row_ids in removal order.
    """

    dataset: Dataset
    provenance: tuple[str, ...]
    parents: Mapping[int, tuple[int, int, float]] = field(default_factory=dict)
    removed_ids: tuple[int, ...] = ()

    @property
    def n_synthetic(self) -> int:
        return len(self.parents)


def removal_count(compression: float, class_size: int) -> int:
    """floor(compression * class_size), guarded against float round-down."""
    return int(math.floor(compression * class_size + 1e-9))


def _resolve_rng(config: ResampleConfig, rng) -> np.random.Generator:
    return np.random.default_rng(config.seed) if rng is None else rng


def _resolve_target(dataset: Dataset, config: ResampleConfig, target) -> int:
    if target is not None:
        return int(target)
    if config.oversample_target == BALANCE_TO_MAJORITY:
        return max(dataset.class_counts().values())
    return int(config.oversample_target)


def _metric_rows(dataset: Dataset, metric_dataset: Dataset | None, pool_ids) -> np.ndarray:
    src = dataset if metric_dataset is None else metric_dataset
    positions = [src.position_of(i) for i in pool_ids]
    return src.features[positions]


def oversample_pool(
    dataset: Dataset,
    pool_ids,
    config: ResampleConfig,
    class_label: str,
    *,
    target: int | None = None,
    rng: np.random.Generator | None = None,
    metric_dataset: Dataset | None = None,
    id_start: int | None = None,
) -> ResampleResult:
    """Append synthetic rows of one class drawn from an explicit candidate pool.

    This is the engine behind oversample_border; the pool is any subset of
    the class (border rows, or the whole class for plain oversampling).
    Neighbor selection distances may be computed on ``metric_dataset`` (for
    example a standardized view) while emitted rows always interpolate the
    feature values of ``dataset``.
    """
    pool = sorted(int(i) for i in pool_ids)
    if not pool:
        raise ValidationError(f"empty oversampling pool for class {class_label!r}")
    current = dataset.class_count(class_label)
    if current == 0:
        raise ValidationError(f"class {class_label!r} not present in dataset")
    target = _resolve_target(dataset, config, target)
    if target < current:
        raise ValidationError(
            f"target {target} below current size {current} of class {class_label!r}"
        )
    n_new = target - current
    rng = _resolve_rng(config, rng)

    strategy = config.strategy
    if strategy == "interpolate" and len(pool) == 1:
        warnings.warn(
            f"single candidate point in class {class_label!r}; "
            "falling back to the duplicate strategy",
            stacklevel=2,
        )
        strategy = "duplicate"

    pool_feats = dataset.features[[dataset.position_of(i) for i in pool]]
    d = dataset.n_features
    new_rows = np.empty((n_new, d))
    parents: dict[int, tuple[int, int, float]] = {}
    start_id = int(dataset.row_ids.max()) + 1 if id_start is None else int(id_start)

    if strategy == "interpolate":
        metric_feats = _metric_rows(dataset, metric_dataset, pool)
        n_neighbors = min(config.k, len(pool) - 1)
        dists = _kernels.pairwise_distances(metric_feats, metric_feats, config.p)
        np.fill_diagonal(dists, np.inf)
        # stable sort: distance ties fall back to ascending row_id (pool is sorted)
        neighbor_idx = np.argsort(dists, axis=1, kind="stable")[:, :n_neighbors]
        for t in range(n_new):
            bi = int(rng.integers(len(pool)))
            ni = int(neighbor_idx[bi, int(rng.integers(n_neighbors))])
            u = float(rng.random())
            new_rows[t] = pool_feats[bi] + u * (pool_feats[ni] - pool_feats[bi])
            parents[start_id + t] = (pool[bi], pool[ni], u)
    else:
        for t in range(n_new):
            src = t % len(pool)
            new_rows[t] = pool_feats[src]
            parents[start_id + t] = (pool[src], pool[src], 0.0)

    if n_new == 0:
        out = dataset
    else:
        out = Dataset(
            np.vstack([dataset.features, new_rows]),
            np.concatenate([dataset.labels, np.full(n_new, str(class_label))]),
            np.concatenate(
                [dataset.row_ids, np.arange(start_id, start_id + n_new, dtype=np.int64)]
            ),
        )
    provenance = ("original",) * dataset.n_rows + ("synthetic",) * n_new
    return ResampleResult(out, provenance, parents, ())


def oversample_border(
    dataset: Dataset,
    partition: Partition,
    config: ResampleConfig,
    class_label: str,
    *,
    target: int | None = None,
    rng: np.random.Generator | None = None,
    metric_dataset: Dataset | None = None,
    id_start: int | None = None,
) -> ResampleResult:
    """Grow one class to the target count using only its border points.

    Strategy "interpolate" emits b + u * (neighbor - b) for a seeded, uniform
    choice of border row b, one of its nearest border neighbors, and
    u ~ U[0, 1); "duplicate" cycles through the border rows verbatim.
    """
    entry = partition[class_label]
    if not entry.border_ids:
        raise NoBorderPointsError(
            f"class {class_label!r} has no border points; "
            "raise alpha or use a duplicate-on-core fallback"
        )
    return oversample_pool(
        dataset,
        entry.border_ids,
        config,
        class_label,
        target=target,
        rng=rng,
        metric_dataset=metric_dataset,
        id_start=id_start,
    )


def _removal_order(entry, policy: str, rng: np.random.Generator) -> list[int]:
    core = sorted(entry.core_ids)
    border = sorted(entry.border_ids)
    if policy == "random":
        core_seq = [int(i) for i in rng.permutation(core)] if core else []
        border_seq = [int(i) for i in rng.permutation(border)] if border else []
        return core_seq + border_seq
    # densest-first: ascending mean kNN distance, ties by ascending row_id;
    # a missing profile (lenient degenerate class) degrades to row_id order
    if entry.profile is None:
        return core + border
    dist_by_id = {
        int(i): float(v)
        for i, v in zip(entry.profile.row_ids, entry.profile.avg_distance)
    }
    key = lambda i: (dist_by_id[i], i)
    return sorted(core, key=key) + sorted(border, key=key)


def downsample_core(
    dataset: Dataset,
    partition: Partition,
    config: ResampleConfig,
    class_label: str,
    *,
    rng: np.random.Generator | None = None,
) -> ResampleResult:
    """Remove floor(compression * class size) rows, core points first.

    Border rows are touched only once the core is exhausted. Policy "random"
    draws uniformly without replacement; "densest-first" removes rows in
    ascending mean-distance order. Survivors keep their features, labels,
    row_ids, and relative order.
    """
    entry = partition[class_label]
    m = dataset.class_count(class_label)
    if m == 0:
        raise ValidationError(f"class {class_label!r} not present in dataset")
    if entry.size != m:
        raise ValidationError(
            f"partition covers {entry.size} rows of class {class_label!r}, dataset has {m}"
        )
    r = removal_count(config.compression, m)
    rng = _resolve_rng(config, rng)
    removed = _removal_order(entry, config.removal_policy, rng)[:r]
    removed_set = set(removed)
    keep = [
        pos
        for pos in range(dataset.n_rows)
        if int(dataset.row_ids[pos]) not in removed_set
    ]
    if not keep:
        raise ValidationError("downsampling removed every row of the dataset")
    out = dataset.take(keep) if removed else dataset
    return ResampleResult(out, ("original",) * out.n_rows, {}, tuple(removed))


def hybrid_resample(
    dataset: Dataset,
    config: ResampleConfig,
    *,
    metric_dataset: Dataset | None = None,
) -> ResampleResult:
    """Downsample the majority core, then oversample the minority border.

    Binary datasets only. The minority class is grown to the
    post-downsampling majority count unless the config carries an explicit
    target, so the output classes are balanced.
    """
    counts = dataset.class_counts()
    if len(counts) != 2:
        raise ValidationError(
            f"hybrid resampling needs exactly 2 classes, got {len(counts)}"
        )
    # majority = larger count; ties broken by label order
    majority = max(sorted(counts), key=lambda lab: counts[lab])
    minority = next(lab for lab in counts if lab != majority)

    partition = partition_dataset(
        dataset if metric_dataset is None else metric_dataset, config
    )
    rng = np.random.default_rng(config.seed)
    down = downsample_core(dataset, partition, config, majority, rng=rng)
    target = (
        down.dataset.class_count(majority)
        if config.oversample_target == BALANCE_TO_MAJORITY
        else int(config.oversample_target)
    )
    over = oversample_border(
        down.dataset,
        partition,
        config,
        minority,
        target=target,
        rng=rng,
        metric_dataset=metric_dataset,
        id_start=int(dataset.row_ids.max()) + 1,
    )
    return ResampleResult(over.dataset, over.provenance, over.parents, down.removed_ids)
