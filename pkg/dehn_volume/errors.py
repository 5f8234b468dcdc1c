"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class DehnVolumeError(Exception):
    """Base class for every error raised by dehn_volume."""


class ComplexError(DehnVolumeError, ValueError):
    """Combinatorial data of a triangulation violates an invariant."""


class ConfigError(DehnVolumeError, ValueError):
    """User supplied configuration cannot be interpreted."""


class NumericalError(DehnVolumeError, RuntimeError):
    """A numerical stage failed: no convergence, non-integral branch, degenerate shape."""
