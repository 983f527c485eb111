"""
Shared pytest fixtures for the PQC regression toolkit test suite.
"""

import json
from pathlib import Path

import numpy as np
import pytest

# Ensure the project root is importable
import sys
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.data.dataset import Dataset
from src.data.synthetic import synth_dataset

FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance checks")


@pytest.fixture
def rng():
    """Seeded generator for random angles, features and programs."""
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def ansatz_census():
    """Hand-transcribed gate census of every variational layer."""
    with open(FIXTURES_DIR / "ansatz_census.json", encoding="utf-8") as f:
        return json.load(f)["ansatze"]


@pytest.fixture
def cosine_dataset():
    """y = cos(x + 0.3) on 50 uniform points: exactly realizable by RY(x) RY(theta)."""
    x = np.linspace(-1.0, 1.0, 50)
    return Dataset(x.reshape(-1, 1), np.cos(x + 0.3), ("x",))


@pytest.fixture
def small_linear():
    """Synthetic linear dataset with 5 features, already inside [-1, 1]."""
    return synth_dataset("linear", 60, 5, seed=7)


@pytest.fixture
def cosine_config(tmp_path):
    """Run config for the realizable single-qubit cosine task."""
    return {
        "dataset": {"synthetic": {"kind": "cosine", "n_samples": 200, "n_features": 1, "seed": 0}},
        "circuit": {"n_qubits": 1, "encoder": "A1", "ansatz": "Single-RY"},
        "split": {"train_ratio": 0.8, "seed": 0},
        "preprocessing": {"scale_features": False, "scale_target": False},
        "optimizer": {"iterations": 300, "seed": 42, "a": 1.0},
        "output_dir": str(tmp_path / "run"),
    }


@pytest.fixture
def write_config(tmp_path):
    """Write a config dict to disk and return its path."""

    def _write(document, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write
