"""
Feature/target scaling and PCA reduction.

Both are fit on the training split only and then applied to every split.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.data.dataset import Dataset
from src.errors import ConfigError

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════════════════════
# MIN-MAX SCALING TO [-1, 1]
# ═══════════════════════════════════════════════════════════════════════


def scale_columns(values: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Affine map of each column from [lo, hi] to [-1, 1]; constant columns map to 0."""
    values = np.asarray(values, dtype=float)
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)
    out = 2.0 * (values - lo) / safe - 1.0
    return np.where(span > 0, out, 0.0)


def unscale_columns(values: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Inverse of scale_columns; constant columns return their fitted value."""
    values = np.asarray(values, dtype=float)
    span = hi - lo
    return np.where(span > 0, (values + 1.0) * 0.5 * span + lo, lo)


@dataclass(frozen=True, eq=False)
class MinMaxScaler:
    """Per-column min/max of the features and of the target."""

    feature_min: np.ndarray
    feature_max: np.ndarray
    target_min: float
    target_max: float

    def transform_features(self, X: np.ndarray) -> np.ndarray:
        return scale_columns(X, self.feature_min, self.feature_max)

    def inverse_features(self, Z: np.ndarray) -> np.ndarray:
        return unscale_columns(Z, self.feature_min, self.feature_max)

    def transform_target(self, y: np.ndarray) -> np.ndarray:
        return scale_columns(y, np.float64(self.target_min), np.float64(self.target_max))

    def inverse_target(self, z: np.ndarray) -> np.ndarray:
        return unscale_columns(z, np.float64(self.target_min), np.float64(self.target_max))

    def to_dict(self) -> dict:
        return {
            "feature_min": self.feature_min.tolist(),
            "feature_max": self.feature_max.tolist(),
            "target_min": self.target_min,
            "target_max": self.target_max,
        }


def fit_scaler(train: Dataset) -> MinMaxScaler:
    """Record column extrema of the training split."""
    return MinMaxScaler(
        feature_min=train.X.min(axis=0),
        feature_max=train.X.max(axis=0),
        target_min=float(train.y.min()),
        target_max=float(train.y.max()),
    )


def clip_unit(values: np.ndarray) -> Tuple[np.ndarray, int]:
    """Clip to [-1, 1] and report how many entries moved."""
    clipped = np.clip(values, -1.0, 1.0)
    return clipped, int(np.count_nonzero(clipped != values))


def apply_scaler(scaler: MinMaxScaler, dataset: Dataset,
                 scale_features: bool = True,
                 scale_target: bool = True) -> Tuple[Dataset, int]:
    """
    Scale *dataset* with a fitted scaler.

    Scaled feature cells that land outside [-1, 1] (rows unseen at fit time)
    are clipped. Unscaled features and targets are never clipped.

    Returns:
        (scaled dataset, number of clipped feature cells)
    """
    X, clipped = dataset.X, 0
    if scale_features:
        X, clipped = clip_unit(scaler.transform_features(dataset.X))
    y = scaler.transform_target(dataset.y) if scale_target else dataset.y
    if clipped:
        logger.info("Clipped %d feature cell(s) to [-1, 1]", clipped)
    return Dataset(X, y, dataset.feature_names, dataset.target_name, dataset.row_ids), clipped


def invert_scaler(scaler: MinMaxScaler, y_scaled: np.ndarray) -> np.ndarray:
    """Map scaled targets or predictions back to original target units."""
    return scaler.inverse_target(y_scaled)


# ═══════════════════════════════════════════════════════════════════════
# PCA
# ═══════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, eq=False)
class PcaModel:
    """Top-r principal axes of the training covariance."""

    mean: np.ndarray
    components: np.ndarray          # (r, d), orthonormal rows
    explained_variance: np.ndarray  # (r,), nonincreasing
    total_variance: float

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    def explained_variance_ratio(self) -> np.ndarray:
        if self.total_variance <= 0:
            return np.zeros_like(self.explained_variance)
        return self.explained_variance / self.total_variance

    def project(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) @ self.components.T

    def reconstruct(self, projected: np.ndarray) -> np.ndarray:
        return self.mean + np.asarray(projected, dtype=float) @ self.components

    def to_dict(self) -> dict:
        return {
            "n_components": self.n_components,
            "explained_variance": self.explained_variance.tolist(),
            "explained_variance_ratio": self.explained_variance_ratio().tolist(),
        }


def fit_pca(train: Dataset, n_components: int) -> PcaModel:
    """
    Eigendecomposition of the sample covariance of the training features.

    The largest-magnitude entry of every component is made positive.

    Raises:
        ConfigError: n_components outside 1..min(N, d).
    """
    X = train.X
    n, d = X.shape
    if not 1 <= n_components <= min(n, d):
        raise ConfigError(
            f"PCA components must be in 1..min(N, d) = 1..{min(n, d)}, got {n_components}"
        )

    mean = X.mean(axis=0)
    centered = X - mean
    cov = centered.T @ centered / max(n - 1, 1)

    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:n_components]
    components = eigvecs[:, order].T
    explained = np.clip(eigvals[order], 0.0, None)

    pivots = np.argmax(np.abs(components), axis=1)
    signs = np.sign(components[np.arange(n_components), pivots])
    components = components * np.where(signs == 0, 1.0, signs)[:, None]

    model = PcaModel(mean, components, explained, float(np.trace(cov)))
    logger.info("PCA: %d -> %d features, %.4f of variance retained",
                d, n_components, float(model.explained_variance_ratio().sum()))
    return model


def apply_pca(model: PcaModel, dataset: Dataset) -> Dataset:
    names = [f"pc{i + 1}" for i in range(model.n_components)]
    return dataset.with_features(model.project(dataset.X), names)
