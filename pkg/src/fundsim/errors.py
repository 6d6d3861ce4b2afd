"""Exception types shared across the simulator."""


class FundsimError(ValueError):
    """Base class for all validation errors raised by fundsim."""


class DomainError(FundsimError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(FundsimError):
    """A parameter combination violates a type invariant or precondition."""
