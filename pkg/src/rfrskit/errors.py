"""Shared exception types."""


class ResourceLimitExceeded(RuntimeError):
    """A bounded search was asked to exceed its configured budget."""
