"""
Synthetic regression datasets.

  cosine         y = cos(w . x + b), w = (1/d, ..., 1/d), b = 0.3
  linear         y = w . x + b,      w_i = (-1)^i (i + 1) / d, b = 0.5
  wide-gaussian  y ~ Normal(90.7, 27.5^2), independent of x

Features are uniform on [-1, 1]. For d = 1 the cosine target is
cos(x + 0.3), which a single RY encoder plus a single RY layer represents
exactly.
"""

from __future__ import annotations

import logging
from typing import Tuple

import numpy as np

from config.constants import SYNTHETIC_KINDS
from src.data.dataset import Dataset, default_feature_names
from src.errors import ConfigError

logger = logging.getLogger(__name__)

COSINE_OFFSET = 0.3
LINEAR_INTERCEPT = 0.5
GAUSSIAN_MEAN = 90.7
GAUSSIAN_STD = 27.5


def cosine_weights(d: int) -> np.ndarray:
    return np.full(d, 1.0 / d)


def linear_weights(d: int) -> np.ndarray:
    i = np.arange(d)
    return np.where(i % 2 == 0, 1.0, -1.0) * (i + 1) / d


def synth_dataset(kind: str, n_samples: int, n_features: int, seed: int) -> Dataset:
    """
    Generate one of the synthetic datasets.

    Raises:
        ConfigError: unknown kind, N < 10 or d < 1.
    """
    if kind not in SYNTHETIC_KINDS:
        raise ConfigError(f"Unknown synthetic kind {kind!r}; expected one of {SYNTHETIC_KINDS}")
    if n_samples < 10:
        raise ConfigError(f"Synthetic datasets need N >= 10, got {n_samples}")
    if n_features < 1:
        raise ConfigError(f"Synthetic datasets need d >= 1, got {n_features}")

    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n_samples, n_features))
    if kind == "cosine":
        y = np.cos(X @ cosine_weights(n_features) + COSINE_OFFSET)
    elif kind == "linear":
        y = X @ linear_weights(n_features) + LINEAR_INTERCEPT
    else:
        y = rng.normal(GAUSSIAN_MEAN, GAUSSIAN_STD, size=n_samples)

    logger.info("Generated %s dataset: N=%d, d=%d, seed=%d", kind, n_samples, n_features, seed)
    return Dataset(X, y, tuple(default_feature_names(n_features)))
