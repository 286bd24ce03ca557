"""
Logging utilities with check-ID correlation support.

In production (LIPMIN_ENV=production), emits structured JSON logs for log aggregation.
In development, emits human-readable logs with the current check_id.
"""

import json
import logging
from typing import Any

import numpy as np

from src.core.config import get_settings
from src.core.correlation import check_id_var

# Arrays longer than this are summarized instead of printed
_MAX_INLINE_ITEMS = 8


def _get_check_id() -> str:
    """Get the current check ID, or '-' outside a check."""
    return check_id_var.get()


class CheckFormatter(logging.Formatter):
    """Human-readable formatter that stamps the current check_id."""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record with check_id attached."""
        record.check_id = _get_check_id()
        return super().format(record)


class JsonFormatter(logging.Formatter):
    """Structured JSON formatter for production log aggregation."""

    def format(self, record: logging.LogRecord) -> str:
        """Emit a single JSON line per log record."""
        log_entry = {
            "timestamp": self.formatTime(record, self.datefmt),
            "level": record.levelname,
            "logger": record.name,
            "check_id": _get_check_id(),
            "message": record.getMessage(),
        }
        if record.exc_info and record.exc_info[1]:
            log_entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(log_entry, default=str)


def _is_production() -> bool:
    return get_settings().is_production


def _level() -> str:
    return get_settings().log_level.upper()


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance with the check-aware formatter.

    Uses JSON output in production, human-readable in development.

    Args:
        name: Logger name (typically __name__)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    # Only configure if no handlers exist
    if not logger.handlers:
        handler = logging.StreamHandler()
        if _is_production():
            formatter: logging.Formatter = JsonFormatter(datefmt="%Y-%m-%dT%H:%M:%S")
        else:
            formatter = CheckFormatter(
                fmt="%(asctime)s - %(name)s - %(levelname)s - [%(check_id)s] %(message)s",
                datefmt="%Y-%m-%d %H:%M:%S",
            )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.setLevel(_level())
        logger.propagate = False

    return logger


def safe_repr(obj: Any) -> str:
    """
    Create a compact string representation suitable for log lines.

    Large numpy arrays are summarized by shape, dtype and range instead of dumped.

    Args:
        obj: Object to represent

    Returns:
        Short string representation
    """
    if isinstance(obj, np.ndarray):
        if obj.size <= _MAX_INLINE_ITEMS:
            return np.array2string(obj, precision=6)
        if obj.size and np.issubdtype(obj.dtype, np.number):
            return (
                f"ndarray(shape={obj.shape}, dtype={obj.dtype}, "
                f"min={np.nanmin(obj):.6g}, max={np.nanmax(obj):.6g})"
            )
        return f"ndarray(shape={obj.shape}, dtype={obj.dtype})"
    if isinstance(obj, dict):
        return str({key: safe_repr(value) for key, value in obj.items()})
    if isinstance(obj, list | tuple):
        if len(obj) > _MAX_INLINE_ITEMS:
            return f"{type(obj).__name__}(len={len(obj)})"
        return str([safe_repr(item) for item in obj])
    return str(obj)
