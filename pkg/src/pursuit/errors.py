"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: domain/contract problems are usage
errors (2), resource exhaustion is 3.
"""


class PursuitError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(PursuitError, ValueError):
    """Invalid argument: vertex out of range, bad family parameters, ..."""


class ContractViolation(PursuitError):
    """A precondition of an operation does not hold.

    ``witness`` carries whatever object demonstrates the violation
    (a shortcut path, an offending position, ...).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceError(PursuitError):
    """A configured budget (state count, product states) would be exceeded."""

    def __init__(self, message, count=None, limit=None):
        super().__init__(message)
        self.count = count
        self.limit = limit


class PolicyFault(PursuitError):
    """A policy emitted an illegal move."""

    def __init__(self, message, turn=None):
        super().__init__(message)
        self.turn = turn


class GeometryError(PursuitError):
    """Degenerate filament geometry detected where it must not occur."""


class GenerationError(PursuitError):
    """A randomized generator ran out of its retry budget."""
