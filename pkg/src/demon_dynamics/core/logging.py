"""Structured logging for Demon Dynamics runs."""

import logging
import logging.config
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import structlog

from .config import settings

LOG_FILE_BYTES = 10 * 1024 * 1024
LOG_FILE_BACKUPS = 5


def _renderer(log_format: str) -> Any:
    if log_format == "json":
        return structlog.processors.JSONRenderer()
    return structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())


def _processor_chain(log_format: str) -> List[Any]:
    chain: List[Any] = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]
    if log_format == "json":
        chain.append(structlog.processors.dict_tracebacks)
    chain.append(_renderer(log_format))
    return chain


def _handler_config(log_file: Optional[str]) -> Dict[str, Dict[str, Any]]:
    # stdout carries CLI tables; logs go to stderr
    handlers: Dict[str, Dict[str, Any]] = {
        "console": {
            "class": "logging.StreamHandler",
            "stream": sys.stderr,
            "formatter": "run",
        },
    }
    if log_file:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "filename": str(path),
            "maxBytes": LOG_FILE_BYTES,
            "backupCount": LOG_FILE_BACKUPS,
            "formatter": "run",
        }
    return handlers


def setup_logging(
    log_level: Optional[str] = None,
    log_format: Optional[str] = None,
    log_file: Optional[str] = None,
) -> None:
    """Configure structlog and the stdlib root logger.

    Args:
        log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL
        log_format: json or console
        log_file: Optional path of a rotating log file
    """
    log_level = (log_level or settings.log_level).upper()
    log_format = log_format or settings.log_format
    log_file = log_file or settings.log_file

    processors = _processor_chain(log_format)
    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    handlers = _handler_config(log_file)
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "run": {
                    "()": structlog.stdlib.ProcessorFormatter,
                    "processor": processors[-1],
                },
            },
            "handlers": handlers,
            "loggers": {
                "": {"handlers": list(handlers), "level": log_level, "propagate": True},
            },
        }
    )
    structlog.get_logger(__name__).debug(
        "Logging configured", level=log_level, format=log_format, file=log_file
    )


@contextmanager
def run_context(**fields: Any) -> Iterator[None]:
    """Bind run identifiers (command, config digest) to every log line inside the block."""
    with structlog.contextvars.bound_contextvars(**fields):
        yield


def log_stage_timing(
    logger: structlog.stdlib.BoundLogger,
    stage: str,
    duration_ms: float,
    **kwargs: Any,
) -> None:
    """Log the completion of a run stage.

    Args:
        logger: Logger instance
        stage: Stage name (assemble, eigendecompose, propagate, ...)
        duration_ms: Stage duration in milliseconds
        **kwargs: Additional context
    """
    logger.info(
        "Run stage completed",
        stage=stage,
        duration_ms=round(duration_ms, 3),
        **kwargs,
    )
