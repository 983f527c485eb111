"""
Command-line surface.

Subcommands:
  train           one SPSA run -> manifest, loss history, parity files
  grid            encoder x ansatz sweep -> grid results + per-cell manifests
  learning-curve  PQC and ridge metrics per train ratio
  depth-scan      re-upload depth x ansatz layers sweep
  describe        gate listing, depth and parameter count of a circuit
  synth           write a synthetic dataset

Exit codes: 0 success, 2 configuration error, 3 compute error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config.constants import (
    ANSATZE,
    DEFAULT_LEARNING_CURVE_RATIOS,
    DEFAULT_RIDGE_LAMBDA,
    DEPTH_SCAN_VALUES,
    ENCODERS,
    EXIT_CODES,
    MAX_TRAIN_RATIO,
    DIAGNOSTIC_ANSATZE,
    REDUCED_ANSATZE,
    RESULTS_SCHEMA_VERSION,
    SPSA_DEFAULTS,
    SYNTHETIC_KINDS,
    TOOL_VERSION,
    default_iterations,
)
from config.settings import settings
from src.circuits.assembly import CircuitSpec, assemble_pqc
from src.data.dataset import Dataset, load_table, save_table
from src.data.splitting import SplitSpec
from src.data.synthetic import synth_dataset
from src.errors import ConfigError, PQCError
from src.evaluation.export import parity_export, write_rows_csv
from src.evaluation.protocols import (
    CSV_COLUMNS,
    CellResult,
    depth_scan,
    grid_sweep,
    learning_curve,
)
from src.pipeline import (
    PreparedData,
    PreprocessingOptions,
    TrainOptions,
    prepare_data,
    stage,
    train_and_score,
)
from src.training.spsa import SpsaConfig
from src.utils.helpers import iso_timestamp, read_json, run_stamp, write_json
from src.utils.logging import setup_logging

logger = logging.getLogger(__name__)

_U64 = 1 << 64


# ═══════════════════════════════════════════════════════════════════════
# RUN CONFIG
# ═══════════════════════════════════════════════════════════════════════


def _check_encoder(value: str) -> str:
    if value not in ENCODERS:
        raise ValueError(f"unknown encoder {value!r}; expected one of: {', '.join(ENCODERS)}")
    return value


def _check_ansatz(value: str) -> str:
    if value not in ANSATZE and value not in DIAGNOSTIC_ANSATZE:
        legal = list(ANSATZE) + list(DIAGNOSTIC_ANSATZE)
        raise ValueError(f"unknown ansatz {value!r}; expected one of: {', '.join(legal)}")
    return value


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SyntheticConfig(_Strict):
    kind: str
    n_samples: int = Field(ge=10)
    n_features: int = Field(ge=1)
    seed: int = Field(default=0, ge=0, lt=_U64)

    @field_validator("kind")
    @classmethod
    def _known_kind(cls, value: str) -> str:
        if value not in SYNTHETIC_KINDS:
            raise ValueError(f"unknown synthetic kind {value!r}; expected one of {list(SYNTHETIC_KINDS)}")
        return value


class DatasetConfig(_Strict):
    path: Optional[str] = None
    target_column: str = "target"
    synthetic: Optional[SyntheticConfig] = None

    @model_validator(mode="after")
    def _one_source(self) -> "DatasetConfig":
        if (self.path is None) == (self.synthetic is None):
            raise ValueError("set exactly one of dataset.path or dataset.synthetic")
        return self


class CircuitConfig(_Strict):
    n_qubits: int = Field(ge=1)
    encoder: str
    ansatz: str
    rud: int = Field(default=1, ge=1)
    ansatz_layers: int = Field(default=1, ge=1)
    redundancy: int = Field(default=1, ge=1)

    @field_validator("encoder")
    @classmethod
    def _known_encoder(cls, value: str) -> str:
        return _check_encoder(value)

    @field_validator("ansatz")
    @classmethod
    def _known_ansatz(cls, value: str) -> str:
        return _check_ansatz(value)

    @model_validator(mode="after")
    def _ranges(self) -> "CircuitConfig":
        if self.rud > settings.app.max_rud:
            raise ValueError(f"rud must be <= {settings.app.max_rud}")
        if self.ansatz_layers > settings.app.max_ansatz_layers:
            raise ValueError(f"ansatz_layers must be <= {settings.app.max_ansatz_layers}")
        if self.n_qubits > settings.simulation.max_qubits:
            raise ValueError(f"n_qubits must be <= {settings.simulation.max_qubits}")
        if self.n_qubits % self.redundancy:
            raise ValueError(f"n_qubits={self.n_qubits} is not a multiple of redundancy={self.redundancy}")
        return self


class SplitConfig(_Strict):
    train_ratio: float = Field(default=MAX_TRAIN_RATIO, gt=0.0, le=MAX_TRAIN_RATIO)
    seed: int = Field(default=0, ge=0, lt=_U64)


class PreprocessingConfig(_Strict):
    scale_features: bool = True
    scale_target: bool = True
    pca_components: Optional[int] = Field(default=None, ge=1)


class OptimizerConfig(_Strict):
    iterations: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0, lt=_U64)
    a: float = Field(default=SPSA_DEFAULTS["a"], gt=0.0)
    c: float = Field(default=SPSA_DEFAULTS["c"], gt=0.0)
    A: float = Field(default=SPSA_DEFAULTS["A"], ge=0.0)
    alpha: float = Field(default=SPSA_DEFAULTS["alpha"], gt=0.0, le=1.0)
    gamma: float = Field(default=SPSA_DEFAULTS["gamma"], gt=0.0, le=1.0)


class GridConfig(_Strict):
    encoders: Optional[List[str]] = None
    ansatze: Optional[List[str]] = None
    reduced: bool = False

    @field_validator("encoders")
    @classmethod
    def _known_encoders(cls, values):
        for value in values or []:
            _check_encoder(value)
        return values

    @field_validator("ansatze")
    @classmethod
    def _known_ansatze(cls, values):
        for value in values or []:
            _check_ansatz(value)
        return values


class LearningCurveConfig(_Strict):
    ratios: List[float] = Field(default_factory=lambda: list(DEFAULT_LEARNING_CURVE_RATIOS))


class DepthScanConfig(_Strict):
    rud_values: List[int] = Field(default_factory=lambda: list(DEPTH_SCAN_VALUES))
    layer_values: List[int] = Field(default_factory=lambda: list(DEPTH_SCAN_VALUES))


class RunConfig(_Strict):
    dataset: DatasetConfig
    circuit: CircuitConfig
    split: SplitConfig = Field(default_factory=SplitConfig)
    preprocessing: PreprocessingConfig = Field(default_factory=PreprocessingConfig)
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    ridge_lambda: Optional[float] = Field(default=DEFAULT_RIDGE_LAMBDA, ge=0.0)
    output_dir: Optional[str] = None
    grid: GridConfig = Field(default_factory=GridConfig)
    learning_curve: LearningCurveConfig = Field(default_factory=LearningCurveConfig)
    depth_scan: DepthScanConfig = Field(default_factory=DepthScanConfig)

    @model_validator(mode="after")
    def _feature_arity(self) -> "RunConfig":
        d = self.preprocessing.pca_components
        if d is None and self.dataset.synthetic is not None:
            d = self.dataset.synthetic.n_features
        if d is not None and self.circuit.n_qubits != self.circuit.redundancy * d:
            raise ValueError(
                f"n_qubits={self.circuit.n_qubits} must equal redundancy "
                f"({self.circuit.redundancy}) x feature count ({d})"
            )
        return self

    def resolved(self) -> "RunConfig":
        """Copy with the iteration budget filled in."""
        if self.optimizer.iterations is not None:
            return self
        optimizer = self.optimizer.model_copy(
            update={"iterations": default_iterations(self.circuit.n_qubits)}
        )
        return self.model_copy(update={"optimizer": optimizer})


def load_config(path: Path) -> RunConfig:
    """Parse a run config, or the `config` block of a run manifest."""
    document = read_json(path)
    if not isinstance(document, dict):
        raise ConfigError(f"{path}: not a readable JSON object")
    if "config" in document and "tool_version" in document:
        document = document["config"]
    return RunConfig.model_validate(document).resolved()


def apply_overrides(cfg: RunConfig, seed: Optional[int], out: Optional[str]) -> RunConfig:
    updates: Dict[str, Any] = {}
    if seed is not None:
        if not 0 <= seed < _U64:
            raise ConfigError(f"--seed must be an unsigned 64-bit integer, got {seed}")
        updates["split"] = cfg.split.model_copy(update={"seed": seed})
        updates["optimizer"] = cfg.optimizer.model_copy(update={"seed": seed})
    if out is not None:
        updates["output_dir"] = out
    return cfg.model_copy(update=updates) if updates else cfg


# ── Config -> domain objects ────────────────────────────────────────


def build_dataset(cfg: RunConfig) -> Dataset:
    with stage("load"):
        if cfg.dataset.synthetic is not None:
            s = cfg.dataset.synthetic
            return synth_dataset(s.kind, s.n_samples, s.n_features, s.seed)
        return load_table(cfg.dataset.path, cfg.dataset.target_column)


def build_spec(cfg: RunConfig) -> CircuitSpec:
    return circuit_spec(cfg.circuit)


def circuit_spec(c: CircuitConfig) -> CircuitSpec:
    return CircuitSpec(c.n_qubits, c.encoder, c.ansatz, c.rud, c.ansatz_layers, c.redundancy)


def build_options(cfg: RunConfig, threads: int = 1) -> TrainOptions:
    o = cfg.optimizer
    spsa = SpsaConfig(iterations=o.iterations, seed=o.seed, a=o.a, c=o.c, A=o.A,
                      alpha=o.alpha, gamma=o.gamma)
    return TrainOptions(spsa=spsa, ridge_lambda=cfg.ridge_lambda, threads=threads)


def build_preprocessing(cfg: RunConfig) -> PreprocessingOptions:
    p = cfg.preprocessing
    return PreprocessingOptions(p.scale_features, p.scale_target, p.pca_components)


def check_feature_count(cfg: RunConfig, dataset: Dataset) -> None:
    d = cfg.preprocessing.pca_components or dataset.n_features
    if cfg.circuit.n_qubits != cfg.circuit.redundancy * d:
        raise ConfigError(
            f"n_qubits={cfg.circuit.n_qubits} must equal redundancy "
            f"({cfg.circuit.redundancy}) x feature count ({d})"
        )


def prepare(cfg: RunConfig) -> PreparedData:
    dataset = build_dataset(cfg)
    check_feature_count(cfg, dataset)
    split_spec = SplitSpec(cfg.split.train_ratio, cfg.split.seed)
    return prepare_data(dataset, split_spec, build_preprocessing(cfg))


def output_dir(cfg: RunConfig, command: str) -> Path:
    if cfg.output_dir:
        return Path(cfg.output_dir)
    return settings.paths.output_dir / f"{command}-{run_stamp()}"


def manifest_header(command: str, cfg: RunConfig) -> Dict[str, Any]:
    return {
        "schema_version": RESULTS_SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "command": command,
        "created_at": iso_timestamp(),
        "config": cfg.model_dump(mode="json"),
        "seeds": {"split": cfg.split.seed, "optimizer": cfg.optimizer.seed},
    }


# ═══════════════════════════════════════════════════════════════════════
# COMMANDS
# ═══════════════════════════════════════════════════════════════════════


def cmd_train(cfg: RunConfig, workers: int = 1) -> Path:
    """Train one PQC and write manifest.json, loss_history.csv and parity files."""
    out = output_dir(cfg, "train")
    prepared = prepare(cfg)
    spec = build_spec(cfg)
    outcome = train_and_score(prepared, spec, build_options(cfg, threads=workers))

    with stage("write"):
        template = assemble_pqc(spec)
        manifest = manifest_header("train", cfg)
        manifest.update({
            "data": prepared.describe(),
            "circuit": {
                "label": spec.label,
                "n_qubits": spec.n_qubits,
                "total_params": template.total_params,
                "gate_count": len(template),
                "depth": template.depth(),
            },
            "metrics": outcome.metrics.to_dict(),
            "ridge": outcome.ridge.to_dict() if outcome.ridge else None,
            "training": outcome.record.to_dict(),
            "theta_digest": outcome.theta_digest,
            "wall_time_seconds": outcome.wall_time_seconds,
        })
        write_json(out / "manifest.json", manifest)
        write_rows_csv(
            [{"iteration": t, "loss": loss} for t, loss in outcome.record.loss_history],
            out / "loss_history.csv", ["iteration", "loss"],
        )
        parity_export(prepared.train_y, outcome.train_pred, out / "parity_train.csv")
        parity_export(prepared.test_y, outcome.test_pred, out / "parity_test.csv")
    logger.info("Run written to %s", out)
    return out


def _cell_manifest(cfg: RunConfig, command: str, prepared: PreparedData,
                   cell: CellResult) -> Dict[str, Any]:
    circuit = cfg.circuit.model_copy(update={
        "encoder": cell.encoder, "ansatz": cell.ansatz,
        "rud": cell.rud, "ansatz_layers": cell.ansatz_layers,
    })
    optimizer = cfg.optimizer.model_copy(update={"seed": cell.seed})
    cell_cfg = cfg.model_copy(update={"circuit": circuit, "optimizer": optimizer})
    manifest = manifest_header(command, cell_cfg)
    manifest.update({"data": prepared.describe(), "result": cell.to_dict()})
    return manifest


def cmd_grid(cfg: RunConfig, workers: int = 1) -> Path:
    """Encoder x ansatz sweep: grid.json, grid.csv and cells/<encoder>__<ansatz>.json."""
    out = output_dir(cfg, "grid")
    encoders = cfg.grid.encoders or list(ENCODERS)
    ansatze = cfg.grid.ansatze or (list(REDUCED_ANSATZE) if cfg.grid.reduced else list(ANSATZE))
    prepared = prepare(cfg)
    result = grid_sweep(encoders, ansatze, prepared, build_spec(cfg), build_options(cfg), workers)

    with stage("write"):
        for (enc, ans), cell in result.cells.items():
            write_json(out / "cells" / f"{enc}__{ans}.json",
                       _cell_manifest(cfg, "grid", prepared, cell))
        document = manifest_header("grid", cfg)
        document.update({"data": prepared.describe(), "grid": result.to_dict()})
        write_json(out / "grid.json", document)
        write_rows_csv(result.rows(), out / "grid.csv", CSV_COLUMNS)
    logger.info("Grid written to %s (%d cells, %d failed)", out, len(result), len(result.failed()))
    return out


def cmd_learning_curve(cfg: RunConfig, workers: int = 1) -> Path:
    """Learning curve: learning_curve.json and learning_curve.csv."""
    out = output_dir(cfg, "learning-curve")
    dataset = build_dataset(cfg)
    check_feature_count(cfg, dataset)
    result = learning_curve(dataset, cfg.learning_curve.ratios, build_spec(cfg),
                            build_options(cfg), cfg.split.seed, build_preprocessing(cfg), workers)

    with stage("write"):
        document = manifest_header("learning-curve", cfg)
        document.update({"learning_curve": result.to_dict()})
        write_json(out / "learning_curve.json", document)
        write_rows_csv(result.rows(), out / "learning_curve.csv",
                       ["train_ratio", "n_train", "n_test", "test_rows_digest"] + CSV_COLUMNS)
    return out


def cmd_depth_scan(cfg: RunConfig, workers: int = 1) -> Path:
    """Re-upload depth x ansatz layers sweep: depth_scan.json and depth_scan.csv."""
    out = output_dir(cfg, "depth-scan")
    prepared = prepare(cfg)
    result = depth_scan(prepared, build_spec(cfg), cfg.depth_scan.rud_values,
                        cfg.depth_scan.layer_values, build_options(cfg), workers)

    with stage("write"):
        document = manifest_header("depth-scan", cfg)
        document.update({"data": prepared.describe(), "depth_scan": result.to_dict()})
        write_json(out / "depth_scan.json", document)
        write_rows_csv(result.rows(), out / "depth_scan.csv", CSV_COLUMNS)
    return out


def render_description(spec: CircuitSpec) -> str:
    """Text report: totals, gate counts per section and per-qubit listings."""
    template = assemble_pqc(spec)
    info = template.describe()
    lines = [
        f"Circuit {spec.label}: n={spec.n_qubits}, k={spec.rud}, v={spec.ansatz_layers}, "
        f"redundancy={spec.redundancy}",
        f"  qubits:      {info['n_qubits']}",
        f"  features:    {info['n_features']}",
        f"  gates:       {info['gate_count']}",
        f"  depth:       {info['depth']}",
        f"  parameters:  {info['total_params']}",
        f"  gate counts: " + ", ".join(f"{k}={v}" for k, v in sorted(info["gate_counts"].items())),
        "",
    ]
    for section, labels in info["sections"].items():
        counts = template.gate_counts(section)
        lines.append(f"[{section}] " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
        lines.extend(f"    {label}" for label in labels)
    lines.append("")
    lines.append("Per qubit:")
    for q, labels in info["per_qubit"].items():
        lines.append(f"  q{q}: " + " ".join(labels))
    return "\n".join(lines) + "\n"


def cmd_describe(spec: CircuitSpec) -> str:
    text = render_description(spec)
    sys.stdout.write(text)
    return text


def cmd_synth(kind: str, n_samples: int, n_features: int, seed: int, path: Path) -> Path:
    dataset = synth_dataset(kind, n_samples, n_features, seed)
    written = save_table(dataset, path)
    logger.info("Wrote %s dataset (N=%d, d=%d) to %s", kind, n_samples, n_features, written)
    return written


# ═══════════════════════════════════════════════════════════════════════
# ENTRY POINT
# ═══════════════════════════════════════════════════════════════════════


_CONFIG_COMMANDS = {
    "train": cmd_train,
    "grid": cmd_grid,
    "learning-curve": cmd_learning_curve,
    "depth-scan": cmd_depth_scan,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="run_pqc",
        description="Train and benchmark parametrized quantum circuits on regression data.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in _CONFIG_COMMANDS:
        p = sub.add_parser(name, help=_CONFIG_COMMANDS[name].__doc__)
        p.add_argument("--config", required=True, type=Path, help="Run config or manifest (JSON).")
        p.add_argument("--workers", type=int, default=None,
                       help="Worker processes (default: PQC_WORKERS or 1).")
        p.add_argument("--out", default=None, help="Output directory.")
        p.add_argument("--seed", type=int, default=None, help="Override split and optimizer seeds.")

    d = sub.add_parser("describe", help="Print the gate listing of a circuit.")
    d.add_argument("--config", type=Path, default=None, help="Take the circuit from a run config.")
    d.add_argument("--n-qubits", type=int, default=5)
    d.add_argument("--encoder", default="A1")
    d.add_argument("--ansatz", default="HWE-CNOT")
    d.add_argument("--rud", type=int, default=1)
    d.add_argument("--layers", type=int, default=1)
    d.add_argument("--redundancy", type=int, default=1)

    s = sub.add_parser("synth", help="Write a synthetic dataset as CSV.")
    s.add_argument("--kind", required=True, choices=list(SYNTHETIC_KINDS))
    s.add_argument("--n-samples", type=int, default=200)
    s.add_argument("--n-features", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, type=Path, help="Destination CSV path.")
    return parser


def _dispatch(args: argparse.Namespace) -> None:
    if args.command == "describe":
        if args.config is not None:
            spec = build_spec(load_config(args.config))
        else:
            spec = circuit_spec(CircuitConfig(
                n_qubits=args.n_qubits, encoder=args.encoder, ansatz=args.ansatz,
                rud=args.rud, ansatz_layers=args.layers, redundancy=args.redundancy,
            ))
        cmd_describe(spec)
        return
    if args.command == "synth":
        cmd_synth(args.kind, args.n_samples, args.n_features, args.seed, args.out)
        return

    cfg = apply_overrides(load_config(args.config), args.seed, args.out)
    workers = args.workers if args.workers is not None else settings.app.workers
    if workers < 1:
        raise ConfigError(f"--workers must be >= 1, got {workers}")
    started = time.monotonic()
    out = _CONFIG_COMMANDS[args.command](cfg, workers)
    logger.info("%s finished in %.1fs -> %s", args.command, time.monotonic() - started, out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    setup_logging()
    try:
        _dispatch(args)
    except ValidationError as exc:
        sys.stderr.write(f"Configuration error:\n{exc}\n")
        return EXIT_CODES["config_error"]
    except ConfigError as exc:
        sys.stderr.write(f"Configuration error: {exc}\n")
        return EXIT_CODES["config_error"]
    except PQCError as exc:
        logger.error("Compute error: %s", exc)
        sys.stderr.write(f"Compute error: {exc}\n")
        return EXIT_CODES["compute_error"]
    return EXIT_CODES["success"]
