"""Exception types raised across the package.

Subclassing ``ValueError``/``RuntimeError`` keeps generic ``except`` clauses
in caller code working while letting tests distinguish failure modes.
"""


class BandspecError(Exception):
    """Base class for all package-specific errors."""


class DomainError(BandspecError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class SymmetryError(BandspecError, ValueError):
    """Input that must be symmetric (matrix or coefficient list) is not."""


class UnsupportedOperatorError(BandspecError, ValueError):
    """The operator lacks the structure an operation requires
    (wrong filtration mode, unbounded band, non-even symbol, ...)."""


class ConfigError(BandspecError, ValueError):
    """Malformed run or operator configuration."""


class ConvergenceError(BandspecError, RuntimeError):
    """An iterative solve exceeded its sweep budget."""
