"""CSV loading/writing, z-score standardization, and synthetic datasets."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import Dataset
from .errors import ValidationError
from .resampling import ResampleResult

__all__ = [
    "CsvSchema",
    "Standardization",
    "load_csv",
    "write_csv",
    "standardize",
    "make_synthetic",
    "make_two_gaussians",
    "make_donut",
]

PROVENANCE_COLUMN = "provenance"


@dataclass(frozen=True)
class CsvSchema:
    """How to read a dataset CSV: which column is the label, and the dialect."""

    label_column: str | int = "label"
    delimiter: str = ","
    has_header: bool = True
    na_policy: str = "error"

    def __post_init__(self):
        if len(self.delimiter) != 1:
            raise ValidationError("delimiter must be a single character")
        if self.na_policy not in ("error", "drop-row"):
            raise ValidationError(f"unknown na_policy {self.na_policy!r}")
        if isinstance(self.label_column, str) and not self.has_header:
            raise ValidationError(
                "label_column by name requires a header; use a column index"
            )


def _label_index(header: list[str] | None, schema: CsvSchema, n_cols: int) -> int:
    if isinstance(schema.label_column, int):
        idx = schema.label_column
        if not 0 <= idx < n_cols:
            raise ValidationError(
                f"label column index {idx} out of range for {n_cols} columns"
            )
        return idx
    matches = [i for i, name in enumerate(header) if name == schema.label_column]
    if len(matches) != 1:
        raise ValidationError(
            f"label column {schema.label_column!r} matched {len(matches)} header "
            f"columns, expected exactly 1"
        )
    return matches[0]


def load_csv(path, schema: CsvSchema = CsvSchema()) -> Dataset:
    """Read a dataset CSV; labels are taken verbatim, features must be finite.

    Under na_policy "drop-row" a row with any unparsable or non-finite
    feature cell is dropped (counted in a single warning) instead of
    raising.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh, delimiter=schema.delimiter))
    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = rows[0] if schema.has_header else None
    data = rows[1:] if schema.has_header else rows
    if not data:
        raise ValidationError(f"{path}: no data rows")
    n_cols = len(header) if header is not None else len(data[0])
    label_idx = _label_index(header, schema, n_cols)
    # a column named exactly "provenance" is metadata, never a feature
    skip = {label_idx}
    if header is not None and PROVENANCE_COLUMN in header:
        skip.add(header.index(PROVENANCE_COLUMN))
    if n_cols - len(skip) < 1:
        raise ValidationError(f"{path}: need a label column plus at least one feature")

    features: list[list[float]] = []
    labels: list[str] = []
    dropped = 0
    for r, row in enumerate(data):
        line = r + 2 if schema.has_header else r + 1
        if len(row) != n_cols:
            raise ValidationError(
                f"{path}: line {line} has {len(row)} cells, expected {n_cols}"
            )
        values = []
        bad_col = None
        for c, cell in enumerate(row):
            if c in skip:
                continue
            try:
                v = float(cell)
            except ValueError:
                v = math.nan
            if not math.isfinite(v):
                bad_col = c
                break
            values.append(v)
        if bad_col is not None:
            if schema.na_policy == "drop-row":
                dropped += 1
                continue
            raise ValidationError(
                f"{path}: line {line}, column {bad_col}: "
                f"cell {row[bad_col]!r} is not a finite number"
            )
        features.append(values)
        labels.append(row[label_idx])
    if dropped:
        warnings.warn(f"{path}: dropped {dropped} rows with unparsable cells")
    if not features:
        raise ValidationError(f"{path}: no usable data rows")
    return Dataset(np.array(features, dtype=np.float64), np.array(labels, dtype=np.str_))


def write_csv(data, path, include_provenance: bool = False) -> None:
    """Write a Dataset or ResampleResult with header f0..f{d-1},label[,provenance].

    Floats are printed with shortest round-trip decimals, so a written file
    reloads to bit-identical values.
    """
    if isinstance(data, ResampleResult):
        ds, provenance = data.dataset, data.provenance
    else:
        ds, provenance = data, ("original",) * data.n_rows

    def _write(fh) -> None:
        writer = csv.writer(fh)
        header = [f"f{j}" for j in range(ds.n_features)] + ["label"]
        if include_provenance:
            header.append(PROVENANCE_COLUMN)
        writer.writerow(header)
        for i in range(ds.n_rows):
            row = [repr(float(v)) for v in ds.features[i]]
            row.append(str(ds.labels[i]))
            if include_provenance:
                row.append(provenance[i])
            writer.writerow(row)

    if hasattr(path, "write"):
        _write(path)
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            _write(fh)


@dataclass(frozen=True)
class Standardization:
    """Per-feature statistics fitted on one dataset, reusable on another.

    Population standard deviation (divisor n). Constant features pass
    through unscaled and are flagged in ``constant``.
    """

    mean: np.ndarray
    sigma: np.ndarray
    constant: np.ndarray
    mode: str = "zscore"

    def apply(self, dataset: Dataset) -> Dataset:
        """Re-apply the fitted statistics, e.g. to a test split."""
        if self.mode == "off":
            return dataset
        if dataset.n_features != len(self.mean):
            raise ValidationError(
                f"standardization fitted on {len(self.mean)} features, "
                f"dataset has {dataset.n_features}"
            )
        feats = dataset.features.copy()
        scale = ~self.constant
        feats[:, scale] = (feats[:, scale] - self.mean[scale]) / self.sigma[scale]
        return Dataset(feats, dataset.labels, dataset.row_ids)


def standardize(dataset: Dataset, mode: str = "zscore") -> tuple[Dataset, Standardization]:
    """Z-score the dataset with its own statistics; mode "off" is identity."""
    if mode not in ("off", "zscore"):
        raise ValidationError(f"unknown standardization mode {mode!r}")
    if mode == "off":
        d = dataset.n_features
        stats = Standardization(np.zeros(d), np.ones(d), np.zeros(d, dtype=bool), "off")
        return dataset, stats
    mean = dataset.features.mean(axis=0)
    sigma = np.sqrt(((dataset.features - mean) ** 2).mean(axis=0))
    constant = sigma == 0.0
    if constant.any():
        warnings.warn(
            f"{int(constant.sum())} constant feature(s) left unscaled", stacklevel=2
        )
    stats = Standardization(mean, np.where(constant, 1.0, sigma), constant, "zscore")
    return stats.apply(dataset), stats


def make_two_gaussians(
    n_maj: int,
    n_min: int,
    separation: float = 4.0,
    sigma: float = 0.5,
    d: int = 2,
    seed: int = 0,
    labels: tuple[str, str] = ("majority", "minority"),
) -> Dataset:
    """Two isotropic Gaussian blobs with centers ``separation`` apart.

    Linearly separable for separation > 6 * sigma; smaller separations give
    controlled class overlap.
    """
    if n_maj < 1 or n_min < 1:
        raise ValidationError("class counts must be positive")
    if sigma <= 0 or separation < 0 or d < 1:
        raise ValidationError("sigma must be > 0, separation >= 0, d >= 1")
    rng = np.random.default_rng(seed)
    maj = rng.standard_normal((n_maj, d)) * sigma
    minor = rng.standard_normal((n_min, d)) * sigma
    minor[:, 0] += separation
    feats = np.vstack([maj, minor])
    labs = np.array([labels[0]] * n_maj + [labels[1]] * n_min, dtype=np.str_)
    return Dataset(feats, labs)


def make_donut(
    n: int,
    inner_r: float = 1.0,
    outer_r: float = 2.0,
    seed: int = 0,
    label: str = "donut",
) -> Dataset:
    """Single class spread uniformly (by area) over a 2-D annulus."""
    if n < 1:
        raise ValidationError("n must be positive")
    if inner_r <= 0 or outer_r <= 0 or inner_r >= outer_r:
        raise ValidationError("radii must satisfy 0 < inner_r < outer_r")
    rng = np.random.default_rng(seed)
    radius = np.sqrt(rng.uniform(inner_r**2, outer_r**2, size=n))
    angle = rng.uniform(0.0, 2.0 * math.pi, size=n)
    feats = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    return Dataset(feats, np.full(n, label, dtype=np.str_))


_GENERATORS = {"two-gaussians": make_two_gaussians, "donut": make_donut}


def make_synthetic(kind: str, seed: int = 0, **params) -> Dataset:
    """Dispatch to a named generator ("two-gaussians" or "donut")."""
    try:
        generator = _GENERATORS[kind]
    except KeyError:
        raise ValidationError(
            f"unknown generator {kind!r}; choose from {sorted(_GENERATORS)}"
        ) from None
    return generator(seed=seed, **params)
