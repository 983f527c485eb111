"""
Dataset container and delimited-table I/O.

Tables are comma-delimited with one header row and a numeric body. Every
non-target column becomes a feature, in file order.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.errors import DataFormatError
from src.utils.helpers import write_text_atomic

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix X (N x d), target y (N,), column labels and source row ids."""

    X: np.ndarray
    y: np.ndarray
    feature_names: Tuple[str, ...]
    target_name: str = "target"
    row_ids: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if X.ndim != 2:
            raise DataFormatError(f"X must be two-dimensional, got shape {X.shape}")
        if X.shape[0] != y.shape[0]:
            raise DataFormatError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise DataFormatError(f"Dataset needs N >= 1 and d >= 1, got {X.shape}")
        if len(self.feature_names) != X.shape[1]:
            raise DataFormatError(
                f"{len(self.feature_names)} feature name(s) for {X.shape[1]} column(s)"
            )
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataFormatError("Dataset contains non-finite values")
        row_ids = (np.arange(X.shape[0]) if self.row_ids is None
                   else np.asarray(self.row_ids, dtype=np.int64))
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "row_ids", row_ids)

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def take(self, rows: Sequence[int]) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.X[rows], self.y[rows], self.feature_names,
                       self.target_name, self.row_ids[rows])

    def with_features(self, X: np.ndarray, names: Optional[Sequence[str]] = None) -> "Dataset":
        return Dataset(X, self.y, tuple(names) if names is not None else self.feature_names,
                       self.target_name, self.row_ids)

    def with_target(self, y: np.ndarray) -> "Dataset":
        return Dataset(self.X, y, self.feature_names, self.target_name, self.row_ids)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.X, columns=list(self.feature_names))
        frame[self.target_name] = self.y
        return frame

    def __len__(self) -> int:
        return self.n_samples


# ── Table I/O ───────────────────────────────────────────────────────


def load_table(path: Union[str, Path], target_column: str) -> Dataset:
    """
    Read a comma-delimited table with a header row.

    Raises:
        DataFormatError: empty file, missing target column, or a cell that is
            not a finite number (row and column named in the message).
    """
    p = Path(path)
    try:
        frame = pd.read_csv(p, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise DataFormatError(f"{p}: file is empty")
    except (OSError, pd.errors.ParserError) as exc:
        raise DataFormatError(f"{p}: {exc}")

    if frame.shape[0] == 0:
        raise DataFormatError(f"{p}: no data rows")
    if target_column not in frame.columns:
        raise DataFormatError(
            f"{p}: target column {target_column!r} not found in {list(frame.columns)}"
        )

    numeric = frame.apply(pd.to_numeric, errors="coerce")
    bad = ~np.isfinite(numeric.to_numpy(dtype=float, na_value=np.nan))
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise DataFormatError(
            f"{p}: row {row + 1}, column {frame.columns[col]!r}: "
            f"{frame.iat[row, col]!r} is not a finite number"
        )

    feature_names = [c for c in frame.columns if c != target_column]
    if not feature_names:
        raise DataFormatError(f"{p}: no feature columns besides {target_column!r}")
    dataset = Dataset(
        numeric[feature_names].to_numpy(dtype=float),
        numeric[target_column].to_numpy(dtype=float),
        tuple(feature_names),
        target_column,
    )
    logger.info("Loaded %s: N=%d, d=%d", p.name, dataset.n_samples, dataset.n_features)
    return dataset


def save_table(dataset: Dataset, path: Union[str, Path]) -> Path:
    """Write *dataset* in the format load_table reads, target column last."""
    buffer = io.StringIO()
    dataset.to_frame().to_csv(buffer, index=False, float_format="%.17g")
    return write_text_atomic(path, buffer.getvalue())


def default_feature_names(d: int) -> List[str]:
    return [f"f{i + 1}" for i in range(d)]
