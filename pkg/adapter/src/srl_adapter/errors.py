"""Exception taxonomy, aligned with the CLI exit codes.

InputError exits with 2, ConfigError with 3, anything else with 1.
"""
from __future__ import annotations


class AdapterError(Exception):
    """Base class for all adapter errors."""


class InputError(AdapterError):
    """Bad input data: unreadable files, misaligned predictor output."""


class ConfigError(AdapterError):
    """Bad configuration, including an unavailable predictor backend."""
