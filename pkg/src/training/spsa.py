"""
SPSA minimization of the training MSE.

At iteration t (0-based):
    a_t = a / (A + t + 1)^alpha,  c_t = c / (t + 1)^gamma
    g   = [L(theta + c_t D) - L(theta - c_t D)] / (2 c_t) * D,  D in {-1, +1}^p
    theta <- theta - a_t g

Random draws come from a counter-based Philox stream keyed by the run seed;
the perturbation for iteration t is a pure function of (seed, t), so the
trajectory does not depend on how loss evaluations are scheduled.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config.constants import SPSA_DEFAULTS
from config.settings import settings
from src.circuits.template import CircuitTemplate
from src.data.dataset import Dataset
from src.errors import ConfigError, NonFiniteLossError
from src.training.predict import make_objective

logger = logging.getLogger(__name__)

_U64 = 1 << 64
_INIT_STREAM = 1
_PERTURBATION_STREAM = 2


@dataclass(frozen=True)
class SpsaConfig:
    iterations: int
    seed: int = 0
    a: float = SPSA_DEFAULTS["a"]
    c: float = SPSA_DEFAULTS["c"]
    A: float = SPSA_DEFAULTS["A"]
    alpha: float = SPSA_DEFAULTS["alpha"]
    gamma: float = SPSA_DEFAULTS["gamma"]

    def __post_init__(self):
        if self.iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {self.iterations}")
        if not (self.a > 0 and self.c > 0 and self.A >= 0):
            raise ConfigError(f"SPSA needs a > 0, c > 0, A >= 0; got a={self.a}, c={self.c}, A={self.A}")
        for name in ("alpha", "gamma"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"{name} must be in (0, 1], got {value}")
        if not 0 <= int(self.seed) < _U64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def gains(self, t: int) -> Tuple[float, float]:
        """(a_t, c_t) for 0-based iteration t."""
        a_t = self.a / (self.A + t + 1) ** self.alpha
        c_t = self.c / (t + 1) ** self.gamma
        return a_t, c_t

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(eq=False)
class TrainRecord:
    initial_theta: np.ndarray
    final_theta: np.ndarray
    loss_history: List[Tuple[int, float]]
    wall_time_seconds: float = field(default=0.0)

    @property
    def final_loss(self) -> float:
        return self.loss_history[-1][1]

    def __eq__(self, other: object) -> bool:
        # wall time is not part of the result
        if not isinstance(other, TrainRecord):
            return NotImplemented
        return (np.array_equal(self.initial_theta, other.initial_theta)
                and np.array_equal(self.final_theta, other.final_theta)
                and self.loss_history == other.loss_history)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "initial_theta": self.initial_theta.tolist(),
            "final_theta": self.final_theta.tolist(),
            "loss_history": [[t, loss] for t, loss in self.loss_history],
            "wall_time_seconds": self.wall_time_seconds,
        }


# ── Random streams ──────────────────────────────────────────────────


def _stream(seed: int, stream: int, counter: int = 0) -> np.random.Generator:
    key = (stream << 64) | (int(seed) % _U64)
    # iteration index lives in the second counter word; draws advance the first
    return np.random.Generator(np.random.Philox(key=key, counter=counter << 64))


def perturbation(seed: int, t: int, size: int) -> np.ndarray:
    """Rademacher vector (entries exactly +1 or -1) for iteration t."""
    bits = _stream(seed, _PERTURBATION_STREAM, t).integers(0, 2, size=size)
    return 2.0 * bits - 1.0


def initial_theta(seed: int, size: int) -> np.ndarray:
    """Independent uniform angles on [-pi, pi)."""
    return _stream(seed, _INIT_STREAM).uniform(-math.pi, math.pi, size=size)


# ── Optimizer ───────────────────────────────────────────────────────


def _checked(value: float, t: int) -> float:
    if not math.isfinite(value):
        raise NonFiniteLossError(t, value)
    return value


def spsa_minimize(template: CircuitTemplate, dataset: Dataset, config: SpsaConfig,
                  theta0: Optional[np.ndarray] = None, workers: int = 1) -> TrainRecord:
    """
    Minimize the MSE of template predictions against dataset.y.

    Args:
        template: Assembled circuit.
        dataset: Training split, features in [-1, 1].
        config: Gains, iteration budget and seed.
        theta0: Starting point; drawn from the seed when omitted.
        workers: Threads used per loss evaluation.

    Returns:
        TrainRecord with one (t, loss) entry per iteration.

    Raises:
        NonFiniteLossError: a loss evaluation was NaN or infinite.
    """
    started = time.monotonic()
    objective = make_objective(template, dataset.X, dataset.y, workers)
    p = template.total_params
    theta = (initial_theta(config.seed, p) if theta0 is None
             else template.check_theta(theta0).copy())
    start_theta = theta.copy()
    history: List[Tuple[int, float]] = []

    for t in range(config.iterations):
        a_t, c_t = config.gains(t)
        delta = perturbation(config.seed, t, p)
        loss_plus = _checked(objective(theta + c_t * delta), t)
        loss_minus = _checked(objective(theta - c_t * delta), t)
        gradient = (loss_plus - loss_minus) / (2.0 * c_t) * delta
        theta = theta - a_t * gradient
        loss = _checked(objective(theta), t)
        history.append((t, loss))

        if (t + 1) % settings.app.spsa_log_every == 0 or t + 1 == config.iterations:
            logger.info("SPSA %d/%d: loss=%.6g", t + 1, config.iterations, loss)

    return TrainRecord(
        initial_theta=start_theta,
        final_theta=theta,
        loss_history=history,
        wall_time_seconds=time.monotonic() - started,
    )
