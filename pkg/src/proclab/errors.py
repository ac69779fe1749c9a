"""Semantic error types shared across modules.

Plain ``ValueError`` covers domain and precondition violations; the
classes here mark failures that callers may want to catch specifically.
"""

from __future__ import annotations

__all__ = ["FactorizationError", "ResourceLimitError", "ConfigError"]


class FactorizationError(RuntimeError):
    """A covariance factorization failed after the permitted retries."""


class ResourceLimitError(RuntimeError):
    """An operation would exceed an explicit size guard."""


class ConfigError(ValueError):
    """Invalid experiment configuration or CLI usage; maps to exit code 2."""
