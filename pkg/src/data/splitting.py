"""
Seeded train/test partitioning.

One permutation per seed: the first floor(N * test_ratio) rows are the test
set, the next floor(N * train_ratio) the training set. The test set therefore
does not depend on train_ratio, and smaller training sets are prefixes of
larger ones.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config.constants import MAX_TRAIN_RATIO, TEST_RATIO
from src.data.dataset import Dataset
from src.errors import ConfigError, DataFormatError

logger = logging.getLogger(__name__)

_U64 = 1 << 64


@dataclass(frozen=True)
class SplitSpec:
    train_ratio: float = MAX_TRAIN_RATIO
    seed: int = 0
    test_ratio: float = TEST_RATIO

    def __post_init__(self):
        if not 0.0 < self.train_ratio <= MAX_TRAIN_RATIO:
            raise ConfigError(
                f"train_ratio must be in (0, {MAX_TRAIN_RATIO}], got {self.train_ratio}"
            )
        if not 0.0 < self.test_ratio < 1.0 or self.train_ratio + self.test_ratio > 1.0 + 1e-12:
            raise ConfigError(
                f"train_ratio + test_ratio must not exceed 1, got "
                f"{self.train_ratio} + {self.test_ratio}"
            )
        if not 0 <= int(self.seed) < _U64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def split_indices(n_rows: int, spec: SplitSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns:
        (train indices, test indices) into a table of *n_rows* rows.
    """
    n_test = int(np.floor(n_rows * spec.test_ratio))
    n_train = int(np.floor(n_rows * spec.train_ratio))
    if n_test < 1 or n_train < 1:
        raise DataFormatError(
            f"{n_rows} row(s) give {n_train} training and {n_test} test row(s); "
            f"both need at least 1"
        )
    order = np.random.default_rng(int(spec.seed)).permutation(n_rows)
    return order[n_test:n_test + n_train], order[:n_test]


def split(dataset: Dataset, spec: SplitSpec) -> Tuple[Dataset, Dataset]:
    """Partition *dataset* into (train, test)."""
    train_idx, test_idx = split_indices(dataset.n_samples, spec)
    logger.info("Split N=%d into %d train / %d test (seed=%d)",
                dataset.n_samples, len(train_idx), len(test_idx), spec.seed)
    return dataset.take(train_idx), dataset.take(test_idx)
