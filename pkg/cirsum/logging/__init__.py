"""Structured logging package"""

from .logger import UnifiedLogger, create_logger, log_metric

__all__ = ['UnifiedLogger', 'create_logger', 'log_metric']
