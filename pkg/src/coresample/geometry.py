"""Per-class density profiles and the core/border split.

Every class is profiled independently: each point gets the mean p-norm
distance to its k nearest neighbors from the same class, the class
threshold is a percentile of those means, and points strictly above the
threshold are border points; everything else is core.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import _kernels
from .dataset import Dataset
from .errors import ValidationError

__all__ = [
    "DistanceProfile",
    "ClassPartition",
    "Partition",
    "minkowski_distance",
    "knn_average_profile",
    "percentile_threshold",
    "partition_class",
    "partition_dataset",
]


def _check_norm_order(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p <= 0:
        raise ValidationError(f"norm order must be > 0 or inf, got {p}")
    return p


@dataclass(frozen=True)
class DistanceProfile:
    """Mean k-nearest-neighbor distance per row of one class.

    ``avg_distance[i]`` belongs to the row whose id is ``row_ids[i]``.
    """

    class_label: str
    row_ids: np.ndarray
    avg_distance: np.ndarray
    k: int
    p: float

    def __len__(self) -> int:
        return len(self.avg_distance)


@dataclass(frozen=True)
class ClassPartition:
    """Core/border split of one class with the threshold that produced it."""

    class_label: str
    threshold: float
    core_ids: frozenset[int]
    border_ids: frozenset[int]
    alpha: float
    profile: DistanceProfile | None = None

    @property
    def size(self) -> int:
        return len(self.core_ids) + len(self.border_ids)


@dataclass(frozen=True)
class Partition:
    """Per-class core/border splits keyed by class label."""

    classes: Mapping[str, ClassPartition]

    def __getitem__(self, label: str) -> ClassPartition:
        try:
            return self.classes[label]
        except KeyError:
            raise ValidationError(f"class {label!r} not present in partition") from None

    def __iter__(self):
        return iter(self.classes)

    def __len__(self) -> int:
        return len(self.classes)


def minkowski_distance(a, b, p: float = 2.0) -> float:
    """p-norm distance between two feature vectors; p may be math.inf."""
    p = _check_norm_order(p)
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.ndim != 1 or bv.ndim != 1 or av.shape != bv.shape:
        raise ValidationError(
            f"dimension mismatch: shapes {av.shape} and {bv.shape}"
        )
    if av.size < 1:
        raise ValidationError("vectors must have at least one component")
    if not (np.isfinite(av).all() and np.isfinite(bv).all()):
        raise ValidationError("vectors contain non-finite values")
    diff = np.abs(av - bv)
    if math.isinf(p):
        return float(diff.max())
    if p == 1.0:
        return float(diff.sum())
    if p == 2.0:
        return float(np.sqrt((diff * diff).sum()))
    return float((diff**p).sum() ** (1.0 / p))


def _class_matrix(points, row_ids) -> tuple[np.ndarray, np.ndarray]:
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValidationError(f"class points must be 2-D, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise ValidationError("class points contain non-finite values")
    if row_ids is None:
        ids = np.arange(pts.shape[0], dtype=np.int64)
    else:
        ids = np.asarray(row_ids, dtype=np.int64)
        if ids.shape != (pts.shape[0],):
            raise ValidationError("row_ids must align with class points")
    return pts, ids


def knn_average_profile(
    class_points, k: int, p: float = 2.0, *, row_ids=None, class_label: str = ""
) -> DistanceProfile:
    """Mean distance from each class row to its k nearest same-class rows.

    A point is never its own neighbor. Neighbor ties at the k-th rank are
    broken by ascending row_id; tied values are equal, so the mean itself
    is tie-independent.
    """
    p = _check_norm_order(p)
    pts, ids = _class_matrix(class_points, row_ids)
    m = pts.shape[0]
    if m < 2:
        raise ValidationError(f"class needs at least 2 rows, got {m}")
    if not 1 <= k < m:
        raise ValidationError(f"k exceeds class size: k={k}, class size {m}")
    avg = _kernels.knn_mean_dists(pts, k, p)
    avg.flags.writeable = False
    ids = np.ascontiguousarray(ids)
    ids.flags.writeable = False
    return DistanceProfile(class_label, ids, avg, int(k), p)


def _linear_percentile(values: np.ndarray, alpha: float) -> float:
    """alpha-th percentile with linear interpolation: rank = (m-1)*alpha/100."""
    v = np.sort(values)
    rank = (len(v) - 1) * alpha / 100.0
    lo = int(math.floor(rank))
    hi = min(lo + 1, len(v) - 1)
    return float(v[lo] + (rank - lo) * (v[hi] - v[lo]))


def percentile_threshold(profile, alpha: float) -> float:
    """Distance threshold: the alpha-th percentile of a profile's means.

    Accepts a DistanceProfile or a plain value sequence.
    """
    if not 0.0 <= alpha <= 100.0:
        raise ValidationError(f"alpha must be in [0, 100], got {alpha}")
    values = getattr(profile, "avg_distance", profile)
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValidationError("profile must hold at least one value")
    return _linear_percentile(values, float(alpha))


def partition_class(
    class_points,
    k: int,
    p: float = 2.0,
    alpha: float = 80.0,
    *,
    row_ids=None,
    class_label: str = "",
) -> ClassPartition:
    """Split one class into core (mean distance <= threshold) and border (>)."""
    profile = knn_average_profile(
        class_points, k, p, row_ids=row_ids, class_label=class_label
    )
    threshold = percentile_threshold(profile, alpha)
    above = profile.avg_distance > threshold
    border = frozenset(int(i) for i in profile.row_ids[above])
    core = frozenset(int(i) for i in profile.row_ids[~above])
    return ClassPartition(class_label, threshold, core, border, float(alpha), profile)


def partition_dataset(dataset: Dataset, config) -> Partition:
    """Partition every class of a dataset independently.

    Classes with k or fewer rows cannot be profiled. In strict mode
    (config.lenient False) they raise; in lenient mode all their rows are
    marked core under an infinite threshold, with a warning.
    """
    k, p, alpha = config.k, config.p, config.alpha
    _check_norm_order(p)
    too_small = [label for label in dataset.classes if dataset.class_count(label) <= k]
    if too_small and not config.lenient:
        raise ValidationError(
            f"classes with size <= k={k}: {', '.join(map(repr, too_small))}; "
            "reduce k or pass lenient mode"
        )
    entries: dict[str, ClassPartition] = {}
    for label in dataset.classes:
        positions = dataset.class_positions(label)
        ids = dataset.row_ids[positions]
        if label in too_small:
            warnings.warn(
                f"class {label!r} has {len(positions)} rows (<= k={k}); "
                "marking all of them core",
                stacklevel=2,
            )
            entries[label] = ClassPartition(
                label, math.inf, frozenset(int(i) for i in ids), frozenset(), float(alpha)
            )
        else:
            entries[label] = partition_class(
                dataset.features[positions],
                k,
                p,
                alpha,
                row_ids=ids,
                class_label=label,
            )
    return Partition(entries)
