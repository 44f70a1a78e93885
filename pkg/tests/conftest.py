import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from coresample import Dataset


def random_dataset(rng, n_max=120, d_max=8, n_classes=(2, 4), duplicates=False):
    """Gaussian-mixture dataset with uneven class sizes for fuzz testing."""
    n_cls = int(rng.integers(n_classes[0], n_classes[1] + 1))
    d = int(rng.integers(1, d_max + 1))
    feats, labels = [], []
    for c in range(n_cls):
        m = int(rng.integers(2, max(3, n_max // n_cls) + 1))
        center = rng.uniform(-4, 4, size=d)
        block = center + rng.standard_normal((m, d)) * rng.uniform(0.3, 1.5)
        if duplicates and m >= 4:
            block[m // 2] = block[0]  # exact duplicate to stress ties
        feats.append(block)
        labels += [f"c{c}"] * m
    return np.vstack(feats), labels


def as_dataset(features, labels) -> Dataset:
    return Dataset(np.asarray(features, dtype=float), labels)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
