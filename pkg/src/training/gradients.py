"""
Exact and numerical gradients of the training MSE.

Single-qubit rotations (generator eigenvalues +-1/2) use the two-term shift
rule. Controlled rotations have generator eigenvalues {0, +-1/2}, so their
expectation contains frequencies 1/2 and 1 and needs the four-term rule:

    df = c+ [f(t + pi/2) - f(t - pi/2)] - c- [f(t + 3pi/2) - f(t - 3pi/2)]
    c+- = (sqrt 2 +- 1) / (4 sqrt 2)
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, List, Tuple

import numpy as np

from src.circuits.template import CircuitTemplate, SlotSource
from src.data.dataset import Dataset
from src.errors import GateError
from src.simulator.gates import GateKind
from src.training.loss import mse_loss
from src.training.predict import predict_batch

logger = logging.getLogger(__name__)

_HALF_PI = 0.5 * math.pi
_C_PLUS = (math.sqrt(2.0) + 1.0) / (4.0 * math.sqrt(2.0))
_C_MINUS = (math.sqrt(2.0) - 1.0) / (4.0 * math.sqrt(2.0))

# gate kind -> [(coefficient, shift), ...]
SHIFT_RULES: Dict[GateKind, List[Tuple[float, float]]] = {
    GateKind.RX: [(0.5, _HALF_PI), (-0.5, -_HALF_PI)],
    GateKind.RY: [(0.5, _HALF_PI), (-0.5, -_HALF_PI)],
    GateKind.RZ: [(0.5, _HALF_PI), (-0.5, -_HALF_PI)],
    GateKind.CRX: [(_C_PLUS, _HALF_PI), (-_C_PLUS, -_HALF_PI),
                   (-_C_MINUS, 3 * _HALF_PI), (_C_MINUS, -3 * _HALF_PI)],
    GateKind.CRZ: [(_C_PLUS, _HALF_PI), (-_C_PLUS, -_HALF_PI),
                   (-_C_MINUS, 3 * _HALF_PI), (_C_MINUS, -3 * _HALF_PI)],
}


def _param_kinds(template: CircuitTemplate) -> List[GateKind]:
    kinds: List[GateKind] = [GateKind.RY] * template.total_params
    for slot in template.slots:
        if slot.source is SlotSource.TRAINABLE:
            if slot.kind not in SHIFT_RULES:
                raise GateError(f"No shift rule for trainable {slot.kind.value} slot")
            kinds[slot.param] = slot.kind
    return kinds


def prediction_jacobian(template: CircuitTemplate, theta, X, workers: int = 1) -> np.ndarray:
    """d y_hat_i / d theta_j by shift rules, shape (rows, params)."""
    theta = template.check_theta(theta)
    X = np.asarray(X, dtype=float)
    kinds = _param_kinds(template)
    jac = np.zeros((X.shape[0], theta.shape[0]))
    for j, kind in enumerate(kinds):
        for coeff, shift in SHIFT_RULES[kind]:
            shifted = theta.copy()
            shifted[j] += shift
            jac[:, j] += coeff * predict_batch(template, shifted, X, workers)
    return jac


def parameter_shift_gradient(template: CircuitTemplate, theta, dataset: Dataset,
                             workers: int = 1) -> np.ndarray:
    """dL/dtheta = -(2/N) sum_i (y_i - y_hat_i) d y_hat_i / d theta."""
    theta = template.check_theta(theta)
    residual = dataset.y - predict_batch(template, theta, dataset.X, workers)
    jac = prediction_jacobian(template, theta, dataset.X, workers)
    return -2.0 / dataset.n_samples * residual @ jac


def central_differences(fn: Callable[[np.ndarray], float], theta, h: float = 1e-4) -> np.ndarray:
    """[fn(theta + h e_j) - fn(theta - h e_j)] / 2h for every j."""
    if h <= 0:
        raise ValueError(f"Step h must be positive, got {h}")
    theta = np.asarray(theta, dtype=float).reshape(-1)
    grad = np.zeros_like(theta)
    for j in range(theta.shape[0]):
        step = np.zeros_like(theta)
        step[j] = h
        grad[j] = (fn(theta + step) - fn(theta - step)) / (2.0 * h)
    return grad


def finite_difference_gradient(template: CircuitTemplate, theta, dataset: Dataset,
                               h: float = 1e-4, workers: int = 1) -> np.ndarray:
    """Central-difference estimate of dL/dtheta."""
    theta = template.check_theta(theta)

    def loss(values: np.ndarray) -> float:
        return mse_loss(dataset.y, predict_batch(template, values, dataset.X, workers))

    return central_differences(loss, theta, h)
