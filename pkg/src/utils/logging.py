"""Structured logging configuration."""

import logging
import sys
from typing import Optional

from config.settings import settings


def setup_logging(level: Optional[str] = None) -> None:
    """
    Configure the root logger for command-line runs.

    Log records go to stderr; stdout is reserved for command output such as
    the `describe` report. Calling this again replaces the previous handlers.
    """
    name = (level or settings.app.log_level).upper()
    resolved = getattr(logging, name, None)
    if not isinstance(resolved, int):
        resolved = logging.INFO

    logging.basicConfig(
        level=resolved,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )
    logging.captureWarnings(True)
