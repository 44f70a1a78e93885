"""Core/border-aware resampling and compression for labeled tabular data.

Partitions each class into core and border points via k-NN mean-distance
percentile thresholds, then oversamples borders, downsamples cores, or
both, with an evaluation harness and CLI on top.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .dataset import Dataset
from .errors import CoresampleError, NoBorderPointsError, UsageError, ValidationError
from .geometry import (
    ClassPartition,
    DistanceProfile,
    Partition,
    knn_average_profile,
    minkowski_distance,
    partition_class,
    partition_dataset,
    percentile_threshold,
)
from .resampling import (
    BALANCE_TO_MAJORITY,
    ResampleConfig,
    ResampleResult,
    downsample_core,
    hybrid_resample,
    oversample_border,
    oversample_pool,
)
from .data_io import (
    CsvSchema,
    Standardization,
    load_csv,
    make_donut,
    make_synthetic,
    make_two_gaussians,
    standardize,
    write_csv,
)
from .evaluation import (
    ExperimentRecord,
    MetricsReport,
    SeedOutcome,
    SweepRow,
    borderline_experiment,
    classification_metrics,
    compression_sweep,
    knn_predict,
    majority_label,
    minority_label,
    report_to_json,
    stratified_split,
)

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    "Dataset",
    "CoresampleError",
    "ValidationError",
    "NoBorderPointsError",
    "UsageError",
    "DistanceProfile",
    "ClassPartition",
    "Partition",
    "minkowski_distance",
    "knn_average_profile",
    "percentile_threshold",
    "partition_class",
    "partition_dataset",
    "BALANCE_TO_MAJORITY",
    "ResampleConfig",
    "ResampleResult",
    "oversample_border",
    "oversample_pool",
    "downsample_core",
    "hybrid_resample",
    "CsvSchema",
    "Standardization",
    "load_csv",
    "write_csv",
    "standardize",
    "make_synthetic",
    "make_two_gaussians",
    "make_donut",
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
