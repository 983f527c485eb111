"""
Delimited exports for external plotting.

Parity files hold one (reference, predicted) pair per row followed by a
comment line with the mean and population standard deviation of each column.
"""

from __future__ import annotations

import io
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np
import pandas as pd

from src.errors import ArityError, DataFormatError
from src.utils.helpers import write_text_atomic

logger = logging.getLogger(__name__)

SUMMARY_PREFIX = "# summary:"


def parity_summary(y, y_hat) -> Dict[str, float]:
    y = np.asarray(y, dtype=float)
    y_hat = np.asarray(y_hat, dtype=float)
    return {
        "reference_mean": float(np.mean(y)),
        "reference_std": float(np.std(y)),
        "predicted_mean": float(np.mean(y_hat)),
        "predicted_std": float(np.std(y_hat)),
    }


def parity_export(y, y_hat, path: Union[str, Path]) -> Path:
    """
    Write a parity table in original target units.

    Raises:
        ArityError: unequal lengths or no pairs.
        DataFormatError: the path cannot be written.
    """
    y = np.asarray(y, dtype=float).reshape(-1)
    y_hat = np.asarray(y_hat, dtype=float).reshape(-1)
    if y.shape != y_hat.shape:
        raise ArityError(f"Length mismatch: {y.shape[0]} references vs {y_hat.shape[0]} predictions")
    if y.shape[0] == 0:
        raise ArityError("Parity export needs at least one pair")

    buffer = io.StringIO()
    pd.DataFrame({"reference": y, "predicted": y_hat}).to_csv(
        buffer, index=False, float_format="%.17g"
    )
    summary = parity_summary(y, y_hat)
    buffer.write(SUMMARY_PREFIX + " " + ", ".join(
        f"{key}={value:.17g}" for key, value in summary.items()
    ) + "\n")
    try:
        return write_text_atomic(path, buffer.getvalue())
    except OSError as exc:
        raise DataFormatError(f"Cannot write parity file {path}: {exc}") from exc


def read_parity(path: Union[str, Path]) -> pd.DataFrame:
    """Read the data rows of a parity file (summary line skipped)."""
    return pd.read_csv(path, comment="#")


def write_rows_csv(rows: Sequence[Dict[str, Any]], path: Union[str, Path],
                   columns: List[str]) -> Path:
    """Flat summary table for plotting tools."""
    buffer = io.StringIO()
    pd.DataFrame(list(rows), columns=columns).to_csv(buffer, index=False, float_format="%.10g")
    return write_text_atomic(path, buffer.getvalue())
