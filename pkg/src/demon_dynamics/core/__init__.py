"""Core configuration, errors and logging."""

from .config import settings
from .exceptions import ConfigurationError, DemonDynamicsError, NumericalContractError
from .logging import setup_logging

__all__ = [
    "settings",
    "ConfigurationError",
    "DemonDynamicsError",
    "NumericalContractError",
    "setup_logging",
]
