"""Reasoner logging configuration."""

from __future__ import annotations

import logging
import sys
from typing import Any, Dict, Optional

from pythonjsonlogger import jsonlogger

from dln.config import settings
from dln.constants import LOG_FORMAT_JSON, PERFORMANCE_LOGGER


class JsonFormatter(jsonlogger.JsonFormatter):
    """Format log records as structured JSON."""

    def add_fields(
        self,
        log_record: Dict[str, Any],
        record: logging.LogRecord,
        message_dict: Dict[str, Any],
    ) -> None:
        super().add_fields(log_record, record, message_dict)
        log_record["level"] = record.levelname
        log_record["logger"] = record.name
        log_record.setdefault("time", self.formatTime(record, self.datefmt))


def setup_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """Configure root logging; records go to stderr so stdout stays machine-readable."""

    log_level = (level or settings.LOG_LEVEL).upper()
    log_format = fmt or settings.LOG_FORMAT

    handler = logging.StreamHandler(sys.stderr)
    if log_format == LOG_FORMAT_JSON:
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))

    root_logger = logging.getLogger()
    root_logger.handlers = [handler]
    root_logger.setLevel(log_level)

    # Dedicated loggers for observability dimensions
    logging.getLogger(PERFORMANCE_LOGGER).setLevel(log_level)
    logging.getLogger("dln").setLevel(log_level)
