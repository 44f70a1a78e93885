"""Numpy implementations of the distance kernels.

Selected automatically when the compiled extension is unavailable. The
accumulation runs feature-major in ascending order, matching the compiled
loops, so both backends agree bit-for-bit for p in {1, 2, inf} (general p
may differ by an ulp where numpy's pow and libm disagree).
"""

from __future__ import annotations

import numpy as np

MODE_GENERAL = 0
MODE_L1 = 1
MODE_L2 = 2
MODE_LINF = 3

# Rows handled per pass; bounds the live distance block at _BLOCK * n doubles.
_BLOCK = 512


def mode_of(p: float) -> int:
    if np.isinf(p):
        return MODE_LINF
    if p == 1.0:
        return MODE_L1
    if p == 2.0:
        return MODE_L2
    return MODE_GENERAL


def _powered_block(block: np.ndarray, pts: np.ndarray, p: float, mode: int) -> np.ndarray:
    """sum_f |block_if - pts_jf|^p for every (i, j); max over f for MODE_LINF."""
    acc = np.zeros((block.shape[0], pts.shape[0]))
    diff = np.empty_like(acc)
    for f in range(block.shape[1]):
        np.subtract(block[:, f, None], pts[None, :, f], out=diff)
        np.abs(diff, out=diff)
        if mode == MODE_L2:
            acc += diff * diff
        elif mode == MODE_L1:
            acc += diff
        elif mode == MODE_LINF:
            np.maximum(acc, diff, out=acc)
        else:
            acc += diff**p
    return acc


def _finish_root(values: np.ndarray, p: float, mode: int) -> np.ndarray:
    if mode == MODE_L2:
        return np.sqrt(values, out=values)
    if mode == MODE_GENERAL:
        values **= 1.0 / p
    return values


def pairwise_distances(a, b, p: float) -> np.ndarray:
    """Dense p-norm distance matrix between the rows of a and b."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    mode = mode_of(p)
    return _finish_root(_powered_block(a, b, p, mode), p, mode)


def knn_mean_dists(points: np.ndarray, k: int, p: float, mode: int) -> np.ndarray:
    """Mean distance from each row to its k nearest other rows.

    Ties at the k-th rank do not affect the mean, so no tie-break is applied
    beyond value selection.
    """
    m = points.shape[0]
    out = np.empty(m)
    for start in range(0, m, _BLOCK):
        stop = min(start + _BLOCK, m)
        acc = _powered_block(points[start:stop], points, p, mode)
        acc[np.arange(stop - start), np.arange(start, stop)] = np.inf  # self
        nearest = np.partition(acc, k - 1, axis=1)[:, :k]
        nearest.sort(axis=1)
        _finish_root(nearest, p, mode)
        # ascending sequential sum, same order as the compiled kernel
        out[start:stop] = np.cumsum(nearest, axis=1)[:, -1] / k
    return out


def knn_label_votes(
    train: np.ndarray,
    codes: np.ndarray,
    n_codes: int,
    queries: np.ndarray,
    k: int,
    p: float,
    mode: int,
) -> np.ndarray:
    """Majority label code among each query's k nearest training rows.

    Distance ties resolve to the lower row position; vote ties resolve to
    the tied label seen earliest in the neighbor ranking.
    """
    out = np.empty(queries.shape[0], dtype=np.int64)
    for start in range(0, queries.shape[0], _BLOCK):
        stop = min(start + _BLOCK, queries.shape[0])
        acc = _powered_block(queries[start:stop], train, p, mode)
        order = np.argsort(acc, axis=1, kind="stable")[:, :k]
        for r in range(stop - start):
            ranked = codes[order[r]]
            counts = np.zeros(n_codes, dtype=np.int64)
            for c in ranked:
                counts[c] += 1
            best = counts.max()
            for c in ranked:
                if counts[c] == best:
                    out[start + r] = c
                    break
    return out
