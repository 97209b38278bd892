"""Logging configuration."""

import logging
import sys
from typing import Any, Dict, Optional

from app.config import settings

LOG_FORMAT = "%(asctime)s - %(processName)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(level: Optional[str] = None) -> None:
    """Configure application logging.

    Logs go to stderr so traces and tables written to stdout stay clean.
    Worker processes inherit the configuration through the process name field.
    """
    log_level = getattr(logging, (level or settings.log_level).upper(), logging.INFO)

    logging.basicConfig(
        level=log_level,
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )
    logging.getLogger("concurrent").setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """Get logger instance."""
    return logging.getLogger(name)


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


class StructuredLogger:
    """Logger that appends ``key=value`` fields to each message.

    ``bind`` returns a logger carrying fixed fields, e.g. the run label of a
    learning run, ahead of the per-call ones.
    """

    def __init__(self, name: str, fields: Optional[Dict[str, Any]] = None):
        self.logger = logging.getLogger(name)
        self.fields = dict(fields or {})

    def bind(self, **fields: Any) -> "StructuredLogger":
        return StructuredLogger(self.logger.name, {**self.fields, **fields})

    def _log(self, level: int, message: str, **kwargs: Any) -> None:
        if not self.logger.isEnabledFor(level):
            return
        merged = {**self.fields, **kwargs}
        extra_data = " ".join(f"{k}={_format_value(v)}" for k, v in merged.items())
        self.logger.log(level, f"{message} {extra_data}" if extra_data else message)

    def info(self, message: str, **kwargs: Any) -> None:
        self._log(logging.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        self._log(logging.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs: Any) -> None:
        self._log(logging.ERROR, message, **kwargs)

    def debug(self, message: str, **kwargs: Any) -> None:
        self._log(logging.DEBUG, message, **kwargs)
