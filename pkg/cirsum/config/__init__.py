"""Configuration management package"""

from .manager import CONFIG_KEYS, ConfigManager, GridSpec, RunConfig, create_config_manager

__all__ = ['CONFIG_KEYS', 'ConfigManager', 'GridSpec', 'RunConfig', 'create_config_manager']
