#!/usr/bin/env python3
"""
Centralized Error Handling
Exception hierarchy for the numerics stack and the handler that maps failures
to log records and process exit codes
"""

import traceback
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional


class CirSumError(Exception):
    """Base class for every error raised by cirsum."""


class DomainError(CirSumError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ConvergenceError(CirSumError):
    """A series or iteration did not converge within its term cap."""


class TruncationBudgetError(CirSumError):
    """A truncation policy could not meet its tolerance within the term budget."""

    def __init__(self, message: str, eps: Optional[float] = None, terms: Optional[int] = None):
        super().__init__(message)
        self.eps = eps
        self.terms = terms


class QuadratureError(CirSumError):
    """Adaptive quadrature failed to reach the requested accuracy."""

    def __init__(self, message: str, achieved_error: float = float('nan')):
        super().__init__(f"{message} (achieved error estimate {achieved_error:.3e})")
        self.achieved_error = achieved_error


class NumericalError(CirSumError):
    """Rounding correction larger than the certified truncation bound."""


class DegenerateSampleError(CirSumError):
    """Monte Carlo sample too concentrated for a histogram comparison."""


class ConfigError(CirSumError, ValueError):
    """Invalid or missing configuration value."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


class ErrorSeverity(Enum):
    """Error severity levels"""
    WARNING = "warning"
    RECOVERABLE = "recoverable"
    FATAL = "fatal"


class ErrorCategory(Enum):
    """Error categories"""
    DOMAIN = "domain"
    CONVERGENCE = "convergence"
    TRUNCATION = "truncation"
    QUADRATURE = "quadrature"
    NUMERICAL = "numerical"
    SAMPLING = "sampling"
    FILESYSTEM = "filesystem"
    CONFIGURATION = "configuration"
    UNKNOWN = "unknown"


# Process exit codes of the command-line surface
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_CATEGORY_BY_TYPE = (
    (ConfigError, ErrorCategory.CONFIGURATION),
    (DomainError, ErrorCategory.DOMAIN),
    (ConvergenceError, ErrorCategory.CONVERGENCE),
    (TruncationBudgetError, ErrorCategory.TRUNCATION),
    (QuadratureError, ErrorCategory.QUADRATURE),
    (NumericalError, ErrorCategory.NUMERICAL),
    (DegenerateSampleError, ErrorCategory.SAMPLING),
    (FloatingPointError, ErrorCategory.NUMERICAL),
    (OverflowError, ErrorCategory.NUMERICAL),
    (ZeroDivisionError, ErrorCategory.NUMERICAL),
    (OSError, ErrorCategory.FILESYSTEM),
)

_NUMERICAL_CATEGORIES = frozenset({
    ErrorCategory.DOMAIN,
    ErrorCategory.CONVERGENCE,
    ErrorCategory.TRUNCATION,
    ErrorCategory.QUADRATURE,
    ErrorCategory.NUMERICAL,
    ErrorCategory.SAMPLING,
})


class ErrorHandler:
    """
    Centralized error handling.
    Categorizes, logs and records errors, and decides the exit code a
    command should terminate with.
    """

    def __init__(self, logger=None, max_error_history: int = 100):
        """
        Initialize error handler.

        Args:
            logger: UnifiedLogger (or stdlib logger) used for reporting
            max_error_history: Number of error records kept in memory
        """
        self.logger = logger
        self.max_error_history = max_error_history

        self.error_counts: Dict[str, int] = {}
        self.last_errors: List[Dict[str, Any]] = []

    def categorize_error(self, error: Exception) -> ErrorCategory:
        """
        Categorize an error based on its type.

        Args:
            error: Exception to categorize

        Returns:
            ErrorCategory
        """
        for error_type, category in _CATEGORY_BY_TYPE:
            if isinstance(error, error_type):
                return category
        return ErrorCategory.UNKNOWN

    def assess_severity(self, error: Exception, context: Optional[Dict] = None) -> ErrorSeverity:
        """
        Assess error severity.

        Args:
            error: Exception to assess
            context: Optional context information

        Returns:
            ErrorSeverity
        """
        if isinstance(error, (SystemExit, KeyboardInterrupt)):
            return ErrorSeverity.FATAL

        category = self.categorize_error(error)
        if category in (ErrorCategory.CONFIGURATION, ErrorCategory.FILESYSTEM):
            return ErrorSeverity.FATAL
        if category in _NUMERICAL_CATEGORIES:
            # the caller may retry with a looser eps or another policy
            return ErrorSeverity.RECOVERABLE
        return ErrorSeverity.WARNING

    def exit_code_for(self, category: ErrorCategory) -> int:
        """Map an error category to the process exit code."""
        if category in (ErrorCategory.CONFIGURATION, ErrorCategory.FILESYSTEM):
            return EXIT_CONFIG
        if category in _NUMERICAL_CATEGORIES:
            return EXIT_NUMERICAL
        return EXIT_FAILURE

    def handle_error(
        self,
        error: Exception,
        context: Optional[Dict] = None,
        severity: Optional[ErrorSeverity] = None
    ) -> Dict[str, Any]:
        """
        Handle an error with categorization and logging.

        Args:
            error: Exception that occurred
            context: Optional context information (command, operation, key)
            severity: Optional override for severity assessment

        Returns:
            Error handling result including the exit code
        """
        category = self.categorize_error(error)
        if severity is None:
            severity = self.assess_severity(error, context)

        error_record = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'error_type': type(error).__name__,
            'error_message': str(error),
            'category': category.value,
            'severity': severity.value,
            'context': context or {},
            'traceback': ''.join(traceback.format_exception(type(error), error, error.__traceback__)),
        }
        key = getattr(error, 'key', None)
        if key:
            error_record['context'] = {**error_record['context'], 'key': key}

        self._log_error(error_record)
        self._update_statistics(error_record)

        self.last_errors.append(error_record)
        if len(self.last_errors) > self.max_error_history:
            self.last_errors.pop(0)

        return {
            'handled': True,
            'category': category.value,
            'severity': severity.value,
            'recoverable': severity != ErrorSeverity.FATAL,
            'exit_code': self.exit_code_for(category),
            'message': str(error),
        }

    def _log_error(self, error_record: Dict[str, Any]):
        """Log error record."""
        if self.logger is None:
            return
        message = (
            f"{error_record['category'].upper()} ERROR: "
            f"{error_record['error_type']}: {error_record['error_message']}"
        )
        extra = {'context': error_record['context']}
        if error_record['severity'] == ErrorSeverity.FATAL.value:
            self.logger.critical(message, extra=extra)
        elif error_record['severity'] == ErrorSeverity.RECOVERABLE.value:
            self.logger.error(message, extra=extra)
        else:
            self.logger.warning(message, extra=extra)

    def _update_statistics(self, error_record: Dict[str, Any]):
        """Update error statistics."""
        category = error_record['category']
        self.error_counts[category] = self.error_counts.get(category, 0) + 1

    def get_error_statistics(self) -> Dict[str, Any]:
        """
        Get error statistics.

        Returns:
            Statistics dictionary
        """
        return {
            'total_errors': sum(self.error_counts.values()),
            'by_category': dict(self.error_counts),
            'recent_errors': len(self.last_errors)
        }

    def get_recent_errors(self, count: int = 10) -> List[Dict[str, Any]]:
        """
        Get recent errors.

        Args:
            count: Number of recent errors to return

        Returns:
            List of error records
        """
        return self.last_errors[-count:]

    def clear_error_history(self):
        """Clear error history and statistics."""
        self.error_counts = {}
        self.last_errors = []


def create_error_handler(logger=None, max_error_history: int = 100) -> ErrorHandler:
    """
    Factory function to create error handler.

    Args:
        logger: Logger instance
        max_error_history: Number of records kept

    Returns:
        ErrorHandler instance
    """
    return ErrorHandler(logger=logger, max_error_history=max_error_history)
