"""Logging configuration with structlog."""

import logging
import sys
from typing import Any, TextIO

import structlog

from core.settings import settings


def setup_logging(
    level: str | None = None,
    fmt: str | None = None,
    stream: TextIO | None = None,
) -> None:
    """Configure structured logging.

    The CLI passes ``sys.stderr`` so that standard output only carries
    reports; the HTTP service logs to standard output.
    """
    level_name = (level or settings.log_level).upper()
    renderer: Any
    if (fmt or settings.log_format) == "console":
        renderer = structlog.dev.ConsoleRenderer(colors=False)
    else:
        renderer = structlog.processors.JSONRenderer()

    logging.basicConfig(
        format="%(message)s",
        stream=stream or sys.stdout,
        level=getattr(logging, level_name, logging.INFO),
        force=True,
    )

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )


def bind_correlation_id(correlation_id: str) -> None:
    """Bind a run identifier to the current context."""
    structlog.contextvars.bind_contextvars(correlation_id=correlation_id)
