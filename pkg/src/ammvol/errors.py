"""Exception types shared across the library.

Everything is a ValueError or RuntimeError subclass so callers that do not
care about the fine distinctions can catch the broad class, while the CLI
maps each type to a distinct exit code.
"""

from __future__ import annotations


class AmmVolError(Exception):
    """Base class for all library-specific errors."""


class DomainError(AmmVolError, ValueError):
    """A price or parameter lies outside the curve's valid domain."""


class RangeError(AmmVolError, ValueError):
    """An interval parameter is empty or inverted (e.g. p_lower >= p_upper)."""


class DegenerateCurve(AmmVolError, ValueError):
    """The curve has no usable geometry at the requested point (x'(q) = 0)."""


class InvalidParams(AmmVolError, ValueError):
    """Model parameters fail validation (negative vol, |rho| > 1, ...)."""


class EmptyInput(AmmVolError, ValueError):
    """An input series or book that must be non-empty is empty."""


class UnsortedInput(AmmVolError, ValueError):
    """A series that must be strictly increasing in time is not."""


class InsufficientData(AmmVolError, ValueError):
    """Not enough observations for the requested statistic or window."""


class DegenerateInput(AmmVolError, ValueError):
    """A regression or statistic has no variation to work with."""


class ArbitrageViolation(AmmVolError, ValueError):
    """A quoted swap price admits a static single-asset arbitrage."""


class OutOfBounds(AmmVolError, ValueError):
    """A quoted swap price lies outside the attainable correlation band."""


class NoConvergence(AmmVolError, RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class ParseError(AmmVolError, ValueError):
    """A CSV/JSON input failed validation.  Carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
