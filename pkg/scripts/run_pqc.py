#!/usr/bin/env python3
"""
Train and benchmark parametrized quantum circuits on regression data.

Usage:
    python scripts/run_pqc.py synth --kind cosine --n-samples 200 --n-features 1 --out data/cos.csv
    python scripts/run_pqc.py train --config docs/sample_config.json
    python scripts/run_pqc.py grid --config my_grid.json --workers 4
    python scripts/run_pqc.py learning-curve --config my_run.json
    python scripts/run_pqc.py depth-scan --config my_run.json
    python scripts/run_pqc.py describe --encoder IQP --ansatz Hadamard --n-qubits 5
"""

from __future__ import annotations

import sys
from pathlib import Path

# ── Project root on sys.path ────────────────────────────────────────
_PROJECT_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(_PROJECT_ROOT))

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
