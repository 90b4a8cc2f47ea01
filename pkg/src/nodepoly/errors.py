"""Exception hierarchy shared by the engines and the CLI."""
from __future__ import annotations


class NodePolyError(Exception):
    """Base class for errors raised by this package."""


class DomainError(NodePolyError, ValueError):
    """An argument lies outside the range where the quantity is defined."""


class CapacityError(NodePolyError):
    """The requested computation exceeds a documented size ceiling."""


class CacheFormatError(NodePolyError, ValueError):
    """A template cache file is malformed or fails its integrity checks."""


class InternalConsistencyError(NodePolyError):
    """An internal cross-check failed (for instance interpolation verification)."""


class ConjectureViolation(NodePolyError):
    """A coefficient recursion admitted no polynomial solution of bounded degree."""


class VerificationMismatch(NodePolyError):
    """A computed value disagrees with a reference table."""
