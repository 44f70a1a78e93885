"""Distance kernels with a compiled fast path.

The Cython extension is optional: when it is missing (no compiler, source
checkout without a build step) the numpy implementation takes over with
identical semantics. ``BACKEND`` reports which one is active.
"""

from __future__ import annotations

import numpy as np

from . import _pykernels
from ._pykernels import mode_of, pairwise_distances

try:
    from . import _ckernels as _active

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build environment
    _active = _pykernels
    BACKEND = "numpy"

__all__ = ["BACKEND", "knn_mean_dists", "knn_label_votes", "pairwise_distances"]


def _as_matrix(arr) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.float64)
    if out.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {out.shape}")
    return out


def knn_mean_dists(points, k: int, p: float) -> np.ndarray:
    """Mean distance from each row to its k nearest other rows under the p-norm."""
    pts = _as_matrix(points)
    if not 1 <= k <= pts.shape[0] - 1:
        raise ValueError(f"k={k} out of range for {pts.shape[0]} rows")
    return np.asarray(_active.knn_mean_dists(pts, k, float(p), mode_of(p)))


def knn_label_votes(train, codes, n_codes: int, queries, k: int, p: float) -> np.ndarray:
    """Majority label code among each query's k nearest training rows."""
    tr = _as_matrix(train)
    qs = _as_matrix(queries)
    cd = np.ascontiguousarray(codes, dtype=np.int64)
    if tr.shape[1] != qs.shape[1]:
        raise ValueError("train and query dimensions differ")
    if cd.shape != (tr.shape[0],):
        raise ValueError("one label code per training row required")
    if not 1 <= k <= tr.shape[0]:
        raise ValueError(f"k={k} out of range for {tr.shape[0]} training rows")
    return np.asarray(_active.knn_label_votes(tr, cd, n_codes, qs, k, float(p), mode_of(p)))
