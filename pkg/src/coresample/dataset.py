"""Immutable labeled feature matrix shared by every other module."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ValidationError


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """n rows of d finite feature values plus one opaque string label per row.

    ``row_ids`` are stable identifiers: freshly loaded or generated data gets
    0..n-1, and derived datasets (splits, resampled outputs) keep the ids of
    the rows they retain. Rows are stored in ascending row_id order by every
    constructor in this package, which makes positional tie-breaking equal to
    row_id tie-breaking.
    """

    features: np.ndarray
    labels: np.ndarray
    row_ids: np.ndarray | None = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim != 2:
            raise ValidationError(f"features must be 2-D, got shape {feats.shape}")
        n, d = feats.shape
        if n < 1 or d < 1:
            raise ValidationError(f"need at least 1 row and 1 feature, got {n}x{d}")
        if not np.isfinite(feats).all():
            raise ValidationError("features contain non-finite values")
        labels = np.asarray(self.labels, dtype=np.str_)
        if labels.shape != (n,):
            raise ValidationError(
                f"labels must be a length-{n} vector, got shape {labels.shape}"
            )
        if self.row_ids is None:
            ids = np.arange(n, dtype=np.int64)
        else:
            ids = np.asarray(self.row_ids, dtype=np.int64)
            if ids.shape != (n,):
                raise ValidationError(f"row_ids must have length {n}")
            if ids.min(initial=0) < 0 or len(np.unique(ids)) != n:
                raise ValidationError("row_ids must be unique non-negative integers")
        object.__setattr__(self, "features", _readonly(feats))
        object.__setattr__(self, "labels", _readonly(labels))
        object.__setattr__(self, "row_ids", _readonly(ids))

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @cached_property
    def classes(self) -> tuple[str, ...]:
        """Distinct labels in sorted order."""
        return tuple(np.unique(self.labels).tolist())

    @cached_property
    def _positions_by_id(self) -> dict[int, int]:
        return {int(rid): pos for pos, rid in enumerate(self.row_ids)}

    def class_positions(self, label: str) -> np.ndarray:
        """Matrix row positions (not row_ids) of one class, in matrix order."""
        return np.flatnonzero(self.labels == label)

    def class_count(self, label: str) -> int:
        return int((self.labels == label).sum())

    def class_counts(self) -> dict[str, int]:
        return {label: self.class_count(label) for label in self.classes}

    def position_of(self, row_id: int) -> int:
        try:
            return self._positions_by_id[int(row_id)]
        except KeyError:
            raise ValidationError(f"row_id {row_id} not present in dataset") from None

    def take(self, positions) -> "Dataset":
        """New dataset holding the given matrix rows, keeping their row_ids."""
        pos = np.asarray(positions, dtype=np.int64)
        if pos.size == 0:
            raise ValidationError("cannot build an empty dataset")
        return Dataset(self.features[pos], self.labels[pos], self.row_ids[pos])
