#!/usr/bin/env python3
"""
Centralized Logging System
Structured logging for the cirsum library and command-line tools
"""

import logging
import os
import sys
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Optional

import colorlog
from pythonjsonlogger import jsonlogger

JSON_FIELDS = '%(timestamp)s %(levelname)s %(name)s %(message)s %(module)s %(funcName)s %(lineno)d'
TEXT_FORMAT = '%(log_color)s%(asctime)s %(levelname)-8s%(reset)s %(name)s: %(message)s'


class UnifiedLogger:
    """
    Centralized logging with structured output.
    Configures the named logger (by default the `cirsum` package logger, so
    every module logger of the library propagates to it). Console output goes
    to stderr; stdout belongs to command results.
    """

    def __init__(
        self,
        name: str = "cirsum",
        log_dir: Optional[str] = None,
        log_level: str = "WARNING",
        max_bytes: int = 10485760,  # 10MB
        backup_count: int = 5,
        json_format: bool = True,
        stream=None
    ):
        """
        Initialize unified logger.

        Args:
            name: Logger name
            log_dir: Directory for rotating log files (console only when None)
            log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            max_bytes: Maximum bytes per log file
            backup_count: Number of backup files to keep
            json_format: Use JSON structured logging
            stream: Console stream, stderr by default
        """
        self.name = name
        self.log_dir = Path(log_dir) if log_dir else None
        self.log_level = getattr(logging, log_level.upper(), logging.WARNING)
        self.json_format = json_format

        self.logger = logging.getLogger(name)
        self.logger.setLevel(self.log_level)

        # Remove existing handlers to avoid duplicates
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

        formatter = self._create_json_formatter() if json_format else self._create_text_formatter()

        console_handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
        console_handler.setLevel(self.log_level)
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

        if self.log_dir is not None:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            plain = self._create_json_formatter()

            file_handler = RotatingFileHandler(
                self.log_dir / f"{name.lower()}.log",
                maxBytes=max_bytes,
                backupCount=backup_count
            )
            file_handler.setLevel(self.log_level)
            file_handler.setFormatter(plain)
            self.logger.addHandler(file_handler)

            error_handler = RotatingFileHandler(
                self.log_dir / f"{name.lower()}_errors.log",
                maxBytes=max_bytes,
                backupCount=backup_count
            )
            error_handler.setLevel(logging.ERROR)
            error_handler.setFormatter(plain)
            self.logger.addHandler(error_handler)

        self.context: Dict[str, Any] = {}

    @staticmethod
    def _create_json_formatter() -> logging.Formatter:
        """Create JSON formatter for structured logging."""
        return jsonlogger.JsonFormatter(
            JSON_FIELDS,
            rename_fields={'levelname': 'level', 'name': 'logger', 'funcName': 'function', 'lineno': 'line'},
            timestamp=True
        )

    @staticmethod
    def _create_text_formatter() -> logging.Formatter:
        """Create colored console formatter."""
        return colorlog.ColoredFormatter(
            TEXT_FORMAT,
            datefmt='%Y-%m-%d %H:%M:%S',
            log_colors={
                'DEBUG': 'cyan',
                'INFO': 'green',
                'WARNING': 'yellow',
                'ERROR': 'red',
                'CRITICAL': 'bold_red',
            }
        )

    def set_context(self, **kwargs):
        """
        Set context values for all subsequent log messages.

        Args:
            **kwargs: Context key-value pairs
        """
        self.context.update(kwargs)

    def clear_context(self):
        """Clear all context values."""
        self.context = {}

    def _add_context(self, extra: Optional[Dict] = None) -> Dict:
        """Add context to log extra data."""
        extra = dict(extra or {})
        if self.context:
            extra['context'] = {**self.context, **extra.get('context', {})}
        return extra

    def debug(self, message: str, **kwargs):
        """Log debug message."""
        self.logger.debug(message, extra=self._add_context(kwargs.get('extra')))

    def info(self, message: str, **kwargs):
        """Log info message."""
        self.logger.info(message, extra=self._add_context(kwargs.get('extra')))

    def warning(self, message: str, **kwargs):
        """Log warning message."""
        self.logger.warning(message, extra=self._add_context(kwargs.get('extra')))

    def error(self, message: str, exc_info: bool = False, **kwargs):
        """Log error message."""
        self.logger.error(message, exc_info=exc_info, extra=self._add_context(kwargs.get('extra')))

    def critical(self, message: str, exc_info: bool = False, **kwargs):
        """Log critical message."""
        self.logger.critical(message, exc_info=exc_info, extra=self._add_context(kwargs.get('extra')))

    def exception(self, message: str, **kwargs):
        """Log exception with traceback."""
        self.logger.exception(message, extra=self._add_context(kwargs.get('extra')))

    def metric(self, metric_name: str, value: float, tags: Optional[Dict] = None):
        """
        Log a performance metric (phase timings, evaluation counts).

        Args:
            metric_name: Name of the metric
            value: Metric value
            tags: Optional tags/labels
        """
        log_metric(self.logger, metric_name, value, tags, context=self.context)


def log_metric(
    logger: logging.Logger,
    metric_name: str,
    value: float,
    tags: Optional[Dict] = None,
    context: Optional[Dict] = None
):
    """
    Emit a metric record at INFO on a plain logger.

    Library modules log through their module loggers; the record reaches the
    UnifiedLogger handlers by propagation.
    """
    metric_data = {
        'metric': metric_name,
        'value': value,
        'timestamp': datetime.now(timezone.utc).isoformat()
    }
    if tags:
        metric_data['tags'] = tags
    logger.info(f"METRIC: {metric_name}={value}", extra={'context': {**(context or {}), **metric_data}})


def create_logger(
    name: str = "cirsum",
    log_level: Optional[str] = None,
    json_format: Optional[bool] = None,
    log_dir: Optional[str] = None,
    stream=None
) -> UnifiedLogger:
    """
    Factory function to create a unified logger.

    Args:
        name: Logger name
        log_level: Logging level (defaults to LOG_LEVEL or WARNING)
        json_format: JSON output (defaults to LOG_FORMAT != "text")
        log_dir: Log file directory (defaults to CIRSUM_LOG_DIR)
        stream: Console stream override

    Returns:
        UnifiedLogger instance
    """
    if log_level is None:
        log_level = os.getenv('LOG_LEVEL', 'WARNING')
    if json_format is None:
        json_format = os.getenv('LOG_FORMAT', 'json').lower() != 'text'
    if log_dir is None:
        log_dir = os.getenv('CIRSUM_LOG_DIR') or None

    return UnifiedLogger(
        name=name,
        log_dir=log_dir,
        log_level=log_level,
        json_format=json_format,
        stream=stream
    )
