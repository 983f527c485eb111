"""Common utility functions for the PQC regression toolkit."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Optional, Union

import numpy as np

logger = logging.getLogger(__name__)


# ── Timestamp formatting ────────────────────────────────────────────


def iso_timestamp(dt: Optional[datetime] = None) -> str:
    """Return an ISO-8601 timestamp string (UTC)."""
    if dt is None:
        dt = datetime.now(timezone.utc)
    return dt.isoformat()


def run_stamp(dt: Optional[datetime] = None) -> str:
    """Filesystem-safe UTC stamp used for default run directories."""
    if dt is None:
        dt = datetime.now(timezone.utc)
    return dt.strftime("%Y%m%dT%H%M%SZ")


# ── Digests ─────────────────────────────────────────────────────────


def array_digest(values: Union[np.ndarray, Iterable[float]]) -> str:
    """Short hex digest of an array's float64 bytes (bitwise fingerprint)."""
    data = np.ascontiguousarray(np.asarray(values, dtype=np.float64))
    return hashlib.blake2b(data.tobytes(), digest_size=8).hexdigest()


def index_digest(indices: Iterable[int]) -> str:
    data = np.ascontiguousarray(np.asarray(list(indices), dtype=np.int64))
    return hashlib.blake2b(data.tobytes(), digest_size=8).hexdigest()


# ── JSON utilities ──────────────────────────────────────────────────


def _json_default(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return str(obj)


def to_json_text(data: Any, indent: int = 2) -> str:
    """Deterministic JSON text: sorted keys, numpy values converted."""
    return json.dumps(data, indent=indent, sort_keys=True,
                      default=_json_default, ensure_ascii=False) + "\n"


# ── File I/O helpers ────────────────────────────────────────────────


def write_text_atomic(path: Union[str, Path], text: str) -> Path:
    """
    Write *text* to *path* through a temp file and rename, creating parent
    dirs. Readers never observe a partially written file.

    Returns:
        The Path that was written to.
    """
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{p.name}.", suffix=".tmp", dir=p.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, p)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return p


def write_json(path: Union[str, Path], data: Any, indent: int = 2) -> Path:
    """Write data as pretty-printed, key-sorted JSON to *path* atomically."""
    return write_text_atomic(path, to_json_text(data, indent=indent))


def read_json(path: Union[str, Path], fallback: Any = None) -> Any:
    """
    Read a JSON file, returning *fallback* if the file is missing or invalid.
    """
    p = Path(path)
    if not p.exists():
        return fallback
    try:
        with open(p, encoding="utf-8") as f:
            return json.load(f)
    except (json.JSONDecodeError, OSError) as exc:
        logger.warning("Failed to read JSON from %s: %s", p, exc)
        return fallback
