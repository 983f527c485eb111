# Protocols live in src.evaluation.protocols; they depend on src.pipeline,
# which imports this package, so they are not re-exported here.
from src.evaluation.metrics import MetricsReport, mae, mse, r2
from src.evaluation.baseline import RidgeRegressor, ridge_baseline
from src.evaluation.export import parity_export, parity_summary

__all__ = [
    "MetricsReport",
    "mae",
    "mse",
    "r2",
    "RidgeRegressor",
    "ridge_baseline",
    "parity_export",
    "parity_summary",
]
