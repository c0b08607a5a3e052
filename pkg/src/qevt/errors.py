"""Exception types shared across the package.

Every error carries the short name of the module that raised it, so the
command-line layer can map failures to exit codes and name the origin in
a single machine-parseable line.
"""

from __future__ import annotations


class QevtError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, *, module: str = "qevt"):
        super().__init__(message)
        self.module = module


class ValidationError(QevtError):
    """Malformed input: bad shapes, domains, or file contents."""


class NormBoundError(QevtError):
    """An operator norm or circle sup-norm exceeds its admissible bound."""

    def __init__(self, message: str, *, module: str = "qevt", norm: float = 0.0):
        super().__init__(message, module=module)
        self.norm = norm


class NumericalError(QevtError):
    """A numerical procedure failed: non-convergence, degeneracy, conditioning."""
