"""Regression metrics and the per-run metrics report."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np

from src.errors import ArityError, DegenerateTargetError
from src.training.loss import mse_loss

logger = logging.getLogger(__name__)


def r2(y, y_hat) -> float:
    """
    Coefficient of determination 1 - SS_res / SS_tot.

    Raises:
        ArityError: unequal lengths or fewer than two samples.
        DegenerateTargetError: y has zero variance.
    """
    y = np.asarray(y, dtype=float).reshape(-1)
    y_hat = np.asarray(y_hat, dtype=float).reshape(-1)
    if y.shape != y_hat.shape:
        raise ArityError(f"Length mismatch: {y.shape[0]} targets vs {y_hat.shape[0]} predictions")
    if y.shape[0] < 2:
        raise ArityError(f"R^2 needs at least 2 samples, got {y.shape[0]}")
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise DegenerateTargetError("Target has zero variance; R^2 is undefined")
    ss_res = float(np.sum((y - y_hat) ** 2))
    return 1.0 - ss_res / ss_tot


def mae(y, y_hat) -> float:
    """(1/N) sum |y_i - y_hat_i|."""
    y = np.asarray(y, dtype=float).reshape(-1)
    y_hat = np.asarray(y_hat, dtype=float).reshape(-1)
    if y.shape != y_hat.shape:
        raise ArityError(f"Length mismatch: {y.shape[0]} targets vs {y_hat.shape[0]} predictions")
    if y.shape[0] == 0:
        raise ArityError("MAE of an empty batch is undefined")
    return float(np.mean(np.abs(y - y_hat)))


mse = mse_loss


def _r2_or_none(y, y_hat, split: str) -> Optional[float]:
    try:
        return r2(y, y_hat)
    except (ArityError, DegenerateTargetError) as exc:
        logger.warning("R^2 on %s split not reported: %s", split, exc)
        return None


@dataclass(frozen=True)
class MetricsReport:
    """Train/test metrics in original target units; r2 is None when undefined."""

    r2_train: Optional[float]
    r2_test: Optional[float]
    mae_train: float
    mae_test: float
    mse_train: float
    mse_test: float

    @classmethod
    def from_predictions(cls, y_train, pred_train, y_test, pred_test) -> "MetricsReport":
        return cls(
            r2_train=_r2_or_none(y_train, pred_train, "train"),
            r2_test=_r2_or_none(y_test, pred_test, "test"),
            mae_train=mae(y_train, pred_train),
            mae_test=mae(y_test, pred_test),
            mse_train=mse(y_train, pred_train),
            mse_test=mse(y_test, pred_test),
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
