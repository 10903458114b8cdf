"""Arbitrary-precision pi from a 153-digit-per-term Ramanujan-type series."""

__version__ = "0.1.0"

from pi_forge.mpcore import DomainError, PrecisionContext

__all__ = ["DomainError", "PrecisionContext", "__version__"]
