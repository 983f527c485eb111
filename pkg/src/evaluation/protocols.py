"""
Experiment protocols: encoder x ansatz grid, learning curve and depth scan.

Every protocol turns into a list of independent training jobs. With one
worker they run in order in-process; otherwise they are fanned out to a
process pool through asyncio and gathered with return_exceptions=True, so
a failing job becomes a failed cell instead of aborting the sweep. Results
are keyed, never positional, so completion order does not matter.
"""

from __future__ import annotations

import asyncio
import hashlib
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from config.constants import MAX_TRAIN_RATIO
from src.circuits.ansatze import AnsatzSpec
from src.circuits.assembly import CircuitSpec
from src.circuits.encoders import EncoderSpec
from src.data.dataset import Dataset
from src.data.splitting import SplitSpec
from src.errors import ConfigError, PartitionError
from src.evaluation.metrics import MetricsReport
from src.pipeline import (
    PreparedData,
    PreprocessingOptions,
    RunOutcome,
    TrainOptions,
    prepare_data,
    train_and_score,
)
from src.utils.helpers import index_digest

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "encoder", "ansatz", "rud", "ansatz_layers", "total_params", "seed",
    "r2_train", "r2_test", "mae_train", "mae_test", "mse_train", "mse_test",
    "ridge_r2_train", "ridge_r2_test", "final_loss", "theta_digest",
    "wall_time_seconds", "error",
]


def _check_unique(kind: str, values: Sequence[Any]) -> None:
    duplicates = [str(v) for v, count in Counter(values).items() if count > 1]
    if duplicates:
        raise ConfigError(f"Duplicate {kind} in sweep: {', '.join(duplicates)}")


def derive_cell_seed(run_seed: int, *labels: str) -> int:
    """Unsigned 64-bit seed depending only on the run seed and the labels."""
    h = hashlib.blake2b(str(int(run_seed)).encode(), digest_size=8)
    for label in labels:
        h.update(b"\x00" + label.encode())
    return int.from_bytes(h.digest(), "little")


# ═══════════════════════════════════════════════════════════════════════
# CELL RESULTS
# ═══════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class CellResult:
    """Outcome of one training job; `error` is set instead of metrics on failure."""

    encoder: str
    ansatz: str
    rud: int
    ansatz_layers: int
    seed: int
    total_params: int = 0
    metrics: Optional[MetricsReport] = None
    ridge: Optional[MetricsReport] = None
    final_theta: Tuple[float, ...] = ()
    loss_history: Tuple[Tuple[int, float], ...] = ()
    theta_digest: str = ""
    error: Optional[str] = None
    wall_time_seconds: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def final_loss(self) -> Optional[float]:
        return self.loss_history[-1][1] if self.loss_history else None

    @classmethod
    def from_outcome(cls, outcome: RunOutcome) -> "CellResult":
        spec = outcome.spec
        return cls(
            encoder=spec.encoder,
            ansatz=spec.ansatz,
            rud=spec.rud,
            ansatz_layers=spec.ansatz_layers,
            seed=outcome.seed,
            total_params=outcome.total_params,
            metrics=outcome.metrics,
            ridge=outcome.ridge,
            final_theta=tuple(float(v) for v in outcome.record.final_theta),
            loss_history=tuple((int(t), float(loss)) for t, loss in outcome.record.loss_history),
            theta_digest=outcome.theta_digest,
            wall_time_seconds=outcome.wall_time_seconds,
        )

    @classmethod
    def failed(cls, spec: CircuitSpec, seed: int, exc: BaseException) -> "CellResult":
        return cls(spec.encoder, spec.ansatz, spec.rud, spec.ansatz_layers, seed,
                   error=f"{type(exc).__name__}: {exc}")

    def row(self) -> Dict[str, Any]:
        """Flat record for CSV summaries."""
        row: Dict[str, Any] = {
            "encoder": self.encoder,
            "ansatz": self.ansatz,
            "rud": self.rud,
            "ansatz_layers": self.ansatz_layers,
            "total_params": self.total_params,
            "seed": str(self.seed),
            "final_loss": self.final_loss,
            "theta_digest": self.theta_digest,
            "wall_time_seconds": self.wall_time_seconds,
            "error": self.error or "",
        }
        if self.metrics is not None:
            row.update(self.metrics.to_dict())
        if self.ridge is not None:
            row["ridge_r2_train"] = self.ridge.r2_train
            row["ridge_r2_test"] = self.ridge.r2_test
        return row

    def to_dict(self) -> Dict[str, Any]:
        return {
            "encoder": self.encoder,
            "ansatz": self.ansatz,
            "rud": self.rud,
            "ansatz_layers": self.ansatz_layers,
            "seed": self.seed,
            "total_params": self.total_params,
            "metrics": self.metrics.to_dict() if self.metrics else None,
            "ridge": self.ridge.to_dict() if self.ridge else None,
            "final_theta": list(self.final_theta),
            "final_loss": self.final_loss,
            "theta_digest": self.theta_digest,
            "error": self.error,
            "wall_time_seconds": self.wall_time_seconds,
        }


# ═══════════════════════════════════════════════════════════════════════
# JOB EXECUTION
# ═══════════════════════════════════════════════════════════════════════


@dataclass(frozen=True, eq=False)
class Job:
    prepared: PreparedData
    spec: CircuitSpec
    options: TrainOptions


def run_job(job: Job) -> CellResult:
    return CellResult.from_outcome(train_and_score(job.prepared, job.spec, job.options))


async def _gather_jobs(jobs: Sequence[Job], workers: int) -> List[Union[CellResult, BaseException]]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        tasks = [loop.run_in_executor(pool, run_job, job) for job in jobs]
        return await asyncio.gather(*tasks, return_exceptions=True)


def run_jobs(jobs: Sequence[Job], workers: int = 1) -> List[CellResult]:
    """Run jobs, converting failures into failed cells; output follows job order."""
    if workers <= 1 or len(jobs) <= 1:
        results: List[Union[CellResult, BaseException]] = []
        for job in jobs:
            try:
                results.append(run_job(job))
            except Exception as exc:
                results.append(exc)
    else:
        results = asyncio.run(_gather_jobs(jobs, workers))

    cells: List[CellResult] = []
    for job, result in zip(jobs, results):
        if isinstance(result, CellResult):
            cells.append(result)
            continue
        logger.error("Cell %s (rud=%d, al=%d) failed: %s", job.spec.label,
                     job.spec.rud, job.spec.ansatz_layers, result)
        cells.append(CellResult.failed(job.spec, job.options.spsa.seed, result))
    return cells


# ═══════════════════════════════════════════════════════════════════════
# GRID SWEEP
# ═══════════════════════════════════════════════════════════════════════


@dataclass
class GridResult:
    encoders: List[str]
    ansatze: List[str]
    cells: Dict[Tuple[str, str], CellResult]
    wall_time_seconds: float = field(default=0.0, compare=False)

    def __len__(self) -> int:
        return len(self.cells)

    def failed(self) -> List[CellResult]:
        return [c for c in self.cells.values() if not c.ok]

    def rows(self) -> List[Dict[str, Any]]:
        return [self.cells[(e, a)].row() for e in self.encoders for a in self.ansatze]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "encoders": self.encoders,
            "ansatze": self.ansatze,
            "n_cells": len(self.cells),
            "n_failed": len(self.failed()),
            "cells": [self.cells[(e, a)].to_dict() for e in self.encoders for a in self.ansatze],
            "wall_time_seconds": self.wall_time_seconds,
        }


def grid_sweep(encoders: Sequence[str], ansatze: Sequence[str], prepared: PreparedData,
               base_spec: CircuitSpec, options: TrainOptions, workers: int = 1) -> GridResult:
    """
    One independent SPSA run per (encoder, ansatz) pair.

    Cell seeds are derived from (run seed, encoder, ansatz), so any subset
    of the grid reproduces the same cells as the full sweep.
    """
    if not encoders or not ansatze:
        raise ConfigError("Grid sweep needs at least one encoder and one ansatz")
    _check_unique("encoder", encoders)
    _check_unique("ansatz", ansatze)
    for name in encoders:
        EncoderSpec(name)
    for name in ansatze:
        AnsatzSpec(name)

    t0 = time.monotonic()
    run_seed = options.spsa.seed
    jobs = [
        Job(prepared,
            replace(base_spec, encoder=enc, ansatz=ans),
            options.with_seed(derive_cell_seed(run_seed, enc, ans)))
        for enc in encoders for ans in ansatze
    ]
    logger.info("Grid sweep: %d x %d = %d cells, %d worker(s)",
                len(encoders), len(ansatze), len(jobs), workers)
    cells = run_jobs(jobs, workers)
    result = GridResult(
        list(encoders), list(ansatze),
        {(c.encoder, c.ansatz): c for c in cells},
        time.monotonic() - t0,
    )
    logger.info("Grid sweep finished: %d cell(s), %d failed",
                len(result), len(result.failed()))
    return result


# ═══════════════════════════════════════════════════════════════════════
# LEARNING CURVE
# ═══════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class LearningCurvePoint:
    train_ratio: float
    n_train: int
    n_test: int
    test_rows_digest: str
    cell: CellResult
    train_row_ids: Tuple[int, ...] = ()

    def row(self) -> Dict[str, Any]:
        row = {"train_ratio": self.train_ratio, "n_train": self.n_train,
               "n_test": self.n_test, "test_rows_digest": self.test_rows_digest}
        row.update(self.cell.row())
        return row

    def to_dict(self) -> Dict[str, Any]:
        return {"train_ratio": self.train_ratio, "n_train": self.n_train,
                "n_test": self.n_test, "test_rows_digest": self.test_rows_digest,
                "train_rows_digest": index_digest(self.train_row_ids),
                "result": self.cell.to_dict()}


@dataclass
class LearningCurveResult:
    points: List[LearningCurvePoint]

    @property
    def ratios(self) -> List[float]:
        return [p.train_ratio for p in self.points]

    def test_partition_fixed(self) -> bool:
        return len({p.test_rows_digest for p in self.points}) <= 1

    def rows(self) -> List[Dict[str, Any]]:
        return [p.row() for p in self.points]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ratios": self.ratios,
            "test_partition_fixed": self.test_partition_fixed(),
            "points": [p.to_dict() for p in self.points],
        }


def check_ratios(ratios: Sequence[float]) -> List[float]:
    ratios = [float(r) for r in ratios]
    if not ratios:
        raise ConfigError("Learning curve needs at least one train ratio")
    if any(not 0.0 < r <= MAX_TRAIN_RATIO for r in ratios):
        raise ConfigError(f"Train ratios must lie in (0, {MAX_TRAIN_RATIO}], got {ratios}")
    if any(b <= a for a, b in zip(ratios, ratios[1:])):
        raise ConfigError(f"Train ratios must be strictly increasing, got {ratios}")
    return ratios


def learning_curve(dataset: Dataset, ratios: Sequence[float], spec: CircuitSpec,
                   options: TrainOptions, split_seed: int,
                   preprocessing: PreprocessingOptions = PreprocessingOptions(),
                   workers: int = 1) -> LearningCurveResult:
    """
    PQC and ridge metrics per training ratio with one fixed test partition.

    Training rows are nested: the rows used at a smaller ratio are a prefix
    of those used at every larger ratio.
    """
    ratios = check_ratios(ratios)
    prepared = [prepare_data(dataset, SplitSpec(r, split_seed), preprocessing) for r in ratios]
    cells = run_jobs([Job(p, spec, options) for p in prepared], workers)
    points = [
        LearningCurvePoint(r, p.train.n_samples, p.test.n_samples, p.test_digest(), cell,
                           tuple(int(i) for i in p.train.row_ids))
        for r, p, cell in zip(ratios, prepared, cells)
    ]
    result = LearningCurveResult(points)
    if not result.test_partition_fixed():
        raise PartitionError("Test partition changed across train ratios")
    return result


# ═══════════════════════════════════════════════════════════════════════
# DEPTH SCAN
# ═══════════════════════════════════════════════════════════════════════


@dataclass
class DepthScanResult:
    rud_values: List[int]
    layer_values: List[int]
    cells: Dict[Tuple[int, int], CellResult]

    def rows(self) -> List[Dict[str, Any]]:
        return [self.cells[(k, v)].row() for k in self.rud_values for v in self.layer_values]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rud_values": self.rud_values,
            "ansatz_layer_values": self.layer_values,
            "cells": [self.cells[(k, v)].to_dict()
                      for k in self.rud_values for v in self.layer_values],
        }


def depth_scan(prepared: PreparedData, base_spec: CircuitSpec,
               rud_values: Sequence[int], layer_values: Sequence[int],
               options: TrainOptions, workers: int = 1) -> DepthScanResult:
    """One run per (re-upload depth k, ansatz layers v) pair."""
    if not rud_values or not layer_values:
        raise ConfigError("Depth scan needs at least one k and one v value")
    _check_unique("re-upload depth", [int(k) for k in rud_values])
    _check_unique("ansatz layer count", [int(v) for v in layer_values])
    specs = [replace(base_spec, rud=int(k), ansatz_layers=int(v))
             for k in rud_values for v in layer_values]
    run_seed = options.spsa.seed
    jobs = [Job(prepared, s,
                options.with_seed(derive_cell_seed(run_seed, f"rud={s.rud}", f"al={s.ansatz_layers}")))
            for s in specs]
    logger.info("Depth scan over k=%s, v=%s: %d run(s)", list(rud_values), list(layer_values), len(jobs))
    cells = run_jobs(jobs, workers)
    return DepthScanResult(
        [int(k) for k in rud_values], [int(v) for v in layer_values],
        {(c.rud, c.ansatz_layers): c for c in cells},
    )
