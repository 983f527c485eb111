"""
End-to-end training pipeline.

Coordinates:
  Dataset -> split -> PCA / scaler (fit on train) -> assemble PQC -> SPSA -> metrics

Each stage is tagged so a compute failure surfaces as StageError("<stage>").
"""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterator, Optional

import numpy as np

from config.constants import DEFAULT_RIDGE_LAMBDA
from src.circuits.assembly import CircuitSpec, assemble_pqc
from src.data.dataset import Dataset
from src.data.preprocessing import (
    MinMaxScaler,
    PcaModel,
    apply_pca,
    apply_scaler,
    fit_pca,
    fit_scaler,
)
from src.data.splitting import SplitSpec, split
from src.errors import ConfigError, PQCError, StageError
from src.evaluation.baseline import ridge_baseline
from src.evaluation.metrics import MetricsReport
from src.training.predict import predict_batch
from src.training.spsa import SpsaConfig, TrainRecord, spsa_minimize
from src.utils.helpers import array_digest, index_digest

logger = logging.getLogger(__name__)


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Tag compute failures with the pipeline stage they happened in."""
    t0 = time.monotonic()
    logger.info("Stage %s: start", name)
    try:
        yield
    except (ConfigError, StageError):
        raise
    except (PQCError, ArithmeticError, ValueError, OSError, np.linalg.LinAlgError) as exc:
        raise StageError(name, exc) from exc
    logger.info("Stage %s: done in %.2fs", name, time.monotonic() - t0)


# ── Options ─────────────────────────────────────────────────────────


@dataclass(frozen=True)
class PreprocessingOptions:
    scale_features: bool = True
    scale_target: bool = True
    pca_components: Optional[int] = None


@dataclass(frozen=True)
class TrainOptions:
    """Everything a single training run needs besides data and circuit."""

    spsa: SpsaConfig
    ridge_lambda: Optional[float] = DEFAULT_RIDGE_LAMBDA
    threads: int = 1

    def with_seed(self, seed: int) -> "TrainOptions":
        return replace(self, spsa=replace(self.spsa, seed=seed))


# ── Data preparation ────────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class PreparedData:
    """
    Model-space splits plus what is needed to map back to target units.

    `train` / `test` carry scaled (and PCA-reduced) features and, when
    target scaling is on, scaled targets. `train_y` / `test_y` are always in
    original units.
    """

    train: Dataset
    test: Dataset
    train_y: np.ndarray
    test_y: np.ndarray
    scaler: Optional[MinMaxScaler]
    pca: Optional[PcaModel]
    options: PreprocessingOptions
    clipped_cells: int = 0

    @property
    def n_features(self) -> int:
        return self.train.n_features

    def to_target_units(self, y_model: np.ndarray) -> np.ndarray:
        if self.options.scale_target and self.scaler is not None:
            return self.scaler.inverse_target(y_model)
        return np.asarray(y_model, dtype=float)

    def baseline_splits(self):
        """Scaled features with original-unit targets, for the ridge baseline."""
        return self.train.with_target(self.train_y), self.test.with_target(self.test_y)

    def test_digest(self) -> str:
        return index_digest(self.test.row_ids)

    def describe(self) -> Dict[str, Any]:
        return {
            "n_train": self.train.n_samples,
            "n_test": self.test.n_samples,
            "n_features": self.n_features,
            "clipped_cells": self.clipped_cells,
            "test_rows_digest": self.test_digest(),
            "scaler": self.scaler.to_dict() if self.scaler is not None else None,
            "pca": self.pca.to_dict() if self.pca is not None else None,
        }


def prepare_data(dataset: Dataset, split_spec: SplitSpec,
                 options: PreprocessingOptions = PreprocessingOptions()) -> PreparedData:
    """Split, then fit PCA and the scaler on the training rows only."""
    with stage("split"):
        train_raw, test_raw = split(dataset, split_spec)

    with stage("preprocess"):
        pca = None
        if options.pca_components is not None:
            pca = fit_pca(train_raw, options.pca_components)
            train_raw, test_raw = apply_pca(pca, train_raw), apply_pca(pca, test_raw)

        scaler = None
        train, test, clipped = train_raw, test_raw, 0
        if options.scale_features or options.scale_target:
            scaler = fit_scaler(train_raw)
            train, clipped_train = apply_scaler(scaler, train_raw,
                                                options.scale_features, options.scale_target)
            test, clipped = apply_scaler(scaler, test_raw,
                                         options.scale_features, options.scale_target)
            clipped += clipped_train

    return PreparedData(train, test, train_raw.y, test_raw.y, scaler, pca, options, clipped)


# ── Training ────────────────────────────────────────────────────────


@dataclass(eq=False)
class RunOutcome:
    spec: CircuitSpec
    total_params: int
    record: TrainRecord
    metrics: MetricsReport
    ridge: Optional[MetricsReport]
    train_pred: np.ndarray
    test_pred: np.ndarray
    seed: int
    wall_time_seconds: float = field(default=0.0)

    @property
    def theta_digest(self) -> str:
        return array_digest(self.record.final_theta)

    def summary(self) -> Dict[str, Any]:
        return {
            "encoder": self.spec.encoder,
            "ansatz": self.spec.ansatz,
            "rud": self.spec.rud,
            "ansatz_layers": self.spec.ansatz_layers,
            "total_params": self.total_params,
            "seed": self.seed,
            "metrics": self.metrics.to_dict(),
            "ridge": self.ridge.to_dict() if self.ridge is not None else None,
            "final_loss": self.record.final_loss,
            "theta_digest": self.theta_digest,
            "wall_time_seconds": self.wall_time_seconds,
        }


def train_and_score(prepared: PreparedData, spec: CircuitSpec,
                    options: TrainOptions) -> RunOutcome:
    """Assemble, train with SPSA and report metrics in original units."""
    t0 = time.monotonic()
    if spec.n_features != prepared.n_features:
        raise ConfigError(
            f"{spec.n_qubits} qubit(s) at redundancy {spec.redundancy} read "
            f"{spec.n_features} feature(s), but the data has {prepared.n_features}"
        )

    with stage("assemble"):
        template = assemble_pqc(spec)

    with stage("train"):
        record = spsa_minimize(template, prepared.train, options.spsa, workers=options.threads)

    with stage("score"):
        theta = record.final_theta
        train_pred = prepared.to_target_units(
            predict_batch(template, theta, prepared.train.X, options.threads))
        test_pred = prepared.to_target_units(
            predict_batch(template, theta, prepared.test.X, options.threads))
        metrics = MetricsReport.from_predictions(
            prepared.train_y, train_pred, prepared.test_y, test_pred
        )
        ridge = None
        if options.ridge_lambda is not None:
            ridge = ridge_baseline(*prepared.baseline_splits(), lam=options.ridge_lambda)

    logger.info("%s: train R2=%s, test R2=%s (%d params)",
                spec.label, metrics.r2_train, metrics.r2_test, template.total_params)
    return RunOutcome(spec, template.total_params, record, metrics, ridge,
                      train_pred, test_pred, options.spsa.seed, time.monotonic() - t0)
