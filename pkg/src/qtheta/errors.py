"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a function is defined."""


class ConvergenceError(ArithmeticError):
    """A series failed to reach its certified tolerance within the term budget."""
