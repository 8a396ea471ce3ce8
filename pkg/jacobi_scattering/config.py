"""
Configuration management for jacobi-scattering.

This module holds the numerical resolution knobs and tolerance ladder used
across the package. Settings come from defaults, an optional JSON file
passed explicitly on the command line, and CLI flags, in that order. There
is no environment-variable layer.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

# Default configuration values
DEFAULT_CONFIG = {
    "logging_level": "WARNING",
    "log_file": None,
    "grid_log2": 12,
    "n_max": 256,
    "tolerance": 1e-8,
    "mass_tolerance": 1e-10,
    "besov_tail_ratio": 1e-8,
    "unimodular_tolerance": 1e-8,
    "truncation_tolerance": 1e-14,
    "output_format": "json",
}

VALID_FORMATS = ("json", "csv")


class ConfigError(ValueError):
    """Raised when a configuration file cannot be used."""
    pass


class Config:
    """Configuration manager for jacobi-scattering."""

    def __init__(self, config_file: Optional[str] = None):
        """
        Initialize configuration.

        Args:
            config_file: Optional path to a JSON configuration file
        """
        self._config = DEFAULT_CONFIG.copy()

        if config_file:
            self._load_config_file(config_file)

    def _load_config_file(self, config_file: str):
        """
        Load configuration from a JSON file.

        Raises:
            ConfigError: If the file is unreadable, malformed or names unknown keys
        """
        path = Path(config_file)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except OSError as e:
            raise ConfigError(f"Cannot read configuration file {config_file}: {e}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"{config_file}:{e.lineno}:{e.colno}: {e.msg}")

        if not isinstance(payload, dict):
            raise ConfigError(f"Configuration file {config_file} must hold a JSON object")
        unknown = sorted(set(payload) - set(DEFAULT_CONFIG))
        if unknown:
            raise ConfigError(f"Unknown configuration keys in {config_file}: {', '.join(unknown)}")

        self._config.update(payload)
        logger.info(f"Loaded {len(payload)} settings from {config_file}")

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value.

        Args:
            key: Configuration key
            default: Default value if key not found

        Returns:
            Configuration value
        """
        return self._config.get(key, default)

    def set(self, key: str, value: Any):
        """
        Set configuration value.

        Args:
            key: Configuration key
            value: Configuration value
        """
        self._config[key] = value

    def get_all(self) -> Dict[str, Any]:
        """Get all configuration values."""
        return self._config.copy()

    def update(self, updates: Dict[str, Any]):
        """
        Update multiple configuration values, skipping None entries.

        Args:
            updates: Dictionary of configuration updates
        """
        self._config.update({k: v for k, v in updates.items() if v is not None})

    def reset(self):
        """Restore the defaults."""
        self._config = DEFAULT_CONFIG.copy()

    def validate(self) -> bool:
        """
        Validate configuration values.

        Returns:
            True if configuration is valid
        """
        # Grid must leave room for the moment recursion
        if not isinstance(self.get("grid_log2"), int) or not 3 <= self.get("grid_log2") <= 22:
            return False

        if not isinstance(self.get("n_max"), int) or self.get("n_max") < 2:
            return False

        for key in ("tolerance", "mass_tolerance", "besov_tail_ratio",
                    "unimodular_tolerance", "truncation_tolerance"):
            value = self.get(key)
            if not isinstance(value, (int, float)) or not 0 < value < 1:
                return False

        if self.get("output_format") not in VALID_FORMATS:
            return False

        valid_log_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if str(self.get("logging_level", "")).upper() not in valid_log_levels:
            return False

        return True


# Global configuration instance
config = Config()


def get_config() -> Config:
    """Get the global configuration instance."""
    return config


def get_setting(key: str, default: Any = None) -> Any:
    """Get a configuration setting."""
    return config.get(key, default)


def set_setting(key: str, value: Any):
    """Set a configuration setting."""
    config.set(key, value)


def update_settings(updates: Dict[str, Any]):
    """Update multiple configuration settings."""
    config.update(updates)


def load_settings(config_file: str):
    """Merge a JSON configuration file into the global settings."""
    config._load_config_file(config_file)


def validate_settings() -> bool:
    """Validate all configuration settings."""
    return config.validate()


# Convenience functions for common settings
def get_log_level() -> str:
    """Get logging level."""
    return str(get_setting("logging_level", "WARNING")).upper()


def get_output_format() -> str:
    """Get the table output format, json or csv."""
    return get_setting("output_format", "json")


def get_grid_log2() -> int:
    """Get the default grid size exponent."""
    return get_setting("grid_log2", 12)


def get_n_max() -> int:
    """Get the default recurrence truncation length."""
    return get_setting("n_max", 256)


def get_tolerance() -> float:
    """Get the admissibility and round-trip tolerance."""
    return get_setting("tolerance", 1e-8)


def get_tolerance_ladder() -> Dict[str, float]:
    """Tolerances used to decide pass/fail in reports."""
    return {
        "admissibility": get_setting("tolerance", 1e-8),
        "roundtrip": get_setting("tolerance", 1e-8),
        "mass": get_setting("mass_tolerance", 1e-10),
    }
