"""
Closed-form ridge regression baseline.

Solves (Xb^T Xb + lambda D) beta = Xb^T y with Xb = [1, X] and
D = diag(0, 1, ..., 1), so the intercept is not penalized.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from src.data.dataset import Dataset
from src.errors import ConfigError, SingularSystemError
from src.evaluation.metrics import MetricsReport

logger = logging.getLogger(__name__)


class RidgeRegressor:
    """L2-regularized least squares with an unregularized intercept."""

    def __init__(self, lam: float = 1.0):
        if lam < 0:
            raise ConfigError(f"Ridge lambda must be >= 0, got {lam}")
        self.lam = float(lam)
        self.coef_: Optional[np.ndarray] = None
        self.intercept_: float = 0.0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RidgeRegressor":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float).reshape(-1)
        if X.shape[0] == 0:
            raise ConfigError("Ridge baseline needs at least one training row")

        Xb = np.column_stack([np.ones(X.shape[0]), X])
        penalty = np.eye(Xb.shape[1])
        penalty[0, 0] = 0.0
        A = Xb.T @ Xb + self.lam * penalty
        rhs = Xb.T @ y

        if np.linalg.cond(A) > 1.0 / np.finfo(float).eps:
            raise SingularSystemError(
                f"Ridge normal equations are singular at lambda={self.lam}; use lambda > 0"
            )
        try:
            beta = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError(
                f"Ridge normal equations are singular at lambda={self.lam}; use lambda > 0"
            ) from exc

        self.intercept_ = float(beta[0])
        self.coef_ = beta[1:]
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if self.coef_ is None:
            raise RuntimeError("RidgeRegressor.predict called before fit")
        return np.asarray(X, dtype=float) @ self.coef_ + self.intercept_


def ridge_baseline(train: Dataset, test: Dataset, lam: float = 1.0) -> MetricsReport:
    """
    Fit on *train* and score both splits.

    Features are expected already scaled; targets in original units, so
    the metrics come out in original units.
    """
    model = RidgeRegressor(lam).fit(train.X, train.y)
    report = MetricsReport.from_predictions(
        train.y, model.predict(train.X), test.y, model.predict(test.X)
    )
    logger.info("Ridge baseline (lambda=%g): train R2=%s, test R2=%s",
                lam, report.r2_train, report.r2_test)
    return report
