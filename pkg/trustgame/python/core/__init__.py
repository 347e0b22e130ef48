"""Core infrastructure modules."""

from .logger import logger
from .config_utils import TrustGameConfig, load_manifest, resolve_config
from .validators import (
    EdgeNotFoundError,
    GraphFormatError,
    GuardExceededError,
    InvalidArgumentError,
    TrustGameError,
    UnknownPlayerError,
)

__all__ = [
    "logger",
    "TrustGameConfig",
    "load_manifest",
    "resolve_config",
    "EdgeNotFoundError",
    "GraphFormatError",
    "GuardExceededError",
    "InvalidArgumentError",
    "TrustGameError",
    "UnknownPlayerError",
]
