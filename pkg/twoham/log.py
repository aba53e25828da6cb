"""structlog setup. Everything is written to stderr; stdout belongs to reports."""

from __future__ import annotations

import logging
import sys
from typing import Any

import structlog

_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def configure_logging(verbosity: int = 0, *, json_output: bool = False) -> None:
    level = _LEVELS[max(0, min(verbosity, len(_LEVELS) - 1))]
    renderer: Any
    if json_output:
        renderer = structlog.processors.JSONRenderer(sort_keys=True)
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


def get_logger(name: str) -> Any:
    if not structlog.is_configured():
        configure_logging()
    return structlog.get_logger(name)
