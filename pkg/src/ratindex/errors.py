"""Shared exception base for the ratindex package."""


class RatIndexError(Exception):
    """Base class for all errors raised by this package."""
