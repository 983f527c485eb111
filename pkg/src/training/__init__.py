from src.training.loss import mse_loss
from src.training.predict import make_objective, predict_batch
from src.training.spsa import SpsaConfig, TrainRecord, spsa_minimize
from src.training.gradients import (
    central_differences,
    finite_difference_gradient,
    parameter_shift_gradient,
)

__all__ = [
    "mse_loss",
    "make_objective",
    "predict_batch",
    "SpsaConfig",
    "TrainRecord",
    "spsa_minimize",
    "central_differences",
    "finite_difference_gradient",
    "parameter_shift_gradient",
]
