"""Structured logging setup."""

import logging
import sys
from typing import Any

import structlog

from .config import Settings, get_settings


def _stderr_logger(*args: Any) -> structlog.PrintLogger:
    # Looked up per logger so a replaced sys.stderr is honoured
    return structlog.PrintLogger(file=sys.stderr)


def setup_structured_logging(settings: Settings | None = None) -> None:
    """
    Configure structlog.

    Events go to standard error so that command output on standard output stays
    byte-identical between runs.
    """
    settings = settings or get_settings()

    renderer: Any = (
        structlog.processors.JSONRenderer(sort_keys=True)
        if settings.render_json
        else structlog.dev.ConsoleRenderer(colors=False)
    )

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            getattr(logging, settings.log_level)
        ),
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=not settings.debug,
    )


class StructuredLogger:
    """Structured logger with bound context."""

    def __init__(self, name_or_logger: str | Any):
        if isinstance(name_or_logger, str):
            self.logger = structlog.get_logger(name_or_logger)
        else:
            self.logger = name_or_logger

    def info(self, message: str, **kwargs: Any) -> None:
        """Log info message with context."""
        self.logger.info(message, **kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        """Log warning message with context."""
        self.logger.warning(message, **kwargs)

    def error(self, message: str, **kwargs: Any) -> None:
        """Log error message with context."""
        self.logger.error(message, **kwargs)

    def debug(self, message: str, **kwargs: Any) -> None:
        """Log debug message with context."""
        self.logger.debug(message, **kwargs)

    def with_context(self, **kwargs: Any) -> "StructuredLogger":
        """Logger that adds ``kwargs`` to every event it emits."""
        return StructuredLogger(self.logger.bind(**kwargs))


def get_logger(name: str) -> StructuredLogger:
    """Get a structured logger instance."""
    return StructuredLogger(name)
