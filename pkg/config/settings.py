"""
Central configuration for the PQC regression toolkit.

All settings are loaded from environment variables with sensible defaults.
Per-run knobs (dataset, circuit, optimizer) live in the JSON run config
validated by src/cli.py; only process-wide limits and overrides live here.
"""

import os
from pathlib import Path
from dataclasses import dataclass, field

from dotenv import load_dotenv

load_dotenv()

_BASE_DIR = Path(__file__).resolve().parent.parent


@dataclass
class SimulationSettings:
    """Statevector simulation limits."""

    # Memory is 2^n complex128 values per state
    max_qubits: int = int(os.getenv("PQC_MAX_QUBITS", "24"))
    oracle_max_qubits: int = 10

    # Upper bound on rows x 2^n amplitudes held by one batched simulation chunk
    batch_amplitude_budget: int = 1 << 22

    norm_tolerance: float = 1e-10


@dataclass
class PathSettings:
    """Filesystem path configuration."""

    base_dir: Path = _BASE_DIR
    output_dir: Path = Path(os.getenv("PQC_OUTPUT_DIR", str(_BASE_DIR / "runs")))


@dataclass
class AppSettings:
    """Application-level settings."""

    log_level: str = os.getenv("LOG_LEVEL", "INFO")
    workers: int = int(os.getenv("PQC_WORKERS", "1"))

    # Depth ceilings (the depth studies explore k, v up to 9)
    max_rud: int = 9
    max_ansatz_layers: int = 9

    spsa_log_every: int = 50


@dataclass
class Settings:
    """Root settings object aggregating all sub-settings."""

    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    paths: PathSettings = field(default_factory=PathSettings)
    app: AppSettings = field(default_factory=AppSettings)


settings = Settings()
