"""Mean squared error loss."""

from __future__ import annotations

import numpy as np

from src.errors import ArityError


def _paired(y, y_hat):
    y = np.asarray(y, dtype=float).reshape(-1)
    y_hat = np.asarray(y_hat, dtype=float).reshape(-1)
    if y.shape != y_hat.shape:
        raise ArityError(f"Length mismatch: {y.shape[0]} targets vs {y_hat.shape[0]} predictions")
    if y.shape[0] == 0:
        raise ArityError("Loss of an empty batch is undefined")
    return y, y_hat


def mse_loss(y, y_hat) -> float:
    """(1/N) sum (y_i - y_hat_i)^2."""
    y, y_hat = _paired(y, y_hat)
    return float(np.mean((y - y_hat) ** 2))
