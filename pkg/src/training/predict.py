"""Batched model predictions."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from src.circuits.assembly import simulate_batch
from src.circuits.template import CircuitTemplate
from src.training.loss import mse_loss

logger = logging.getLogger(__name__)


def predict_batch(template: CircuitTemplate, theta, X, workers: int = 1) -> np.ndarray:
    """
    <Z_0> prediction per row of X, in row order.

    With workers > 1 the rows are split into contiguous chunks simulated on
    a thread pool (the numpy kernels release the GIL); results are
    reassembled in the original order.
    """
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return np.empty(0, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)

    if workers <= 1 or X.shape[0] < 2:
        return simulate_batch(template, theta, X)

    chunks = np.array_split(X, min(workers, X.shape[0]))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda rows: simulate_batch(template, theta, rows), chunks))
    return np.concatenate(parts)


def make_objective(template: CircuitTemplate, X, y,
                   workers: int = 1) -> Callable[[np.ndarray], float]:
    """theta -> training MSE on (X, y)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)

    def objective(theta: np.ndarray) -> float:
        return mse_loss(y, predict_batch(template, theta, X, workers))

    return objective
