"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


class UsageError(ValueError):
    """A call or command was assembled incorrectly (bad labels, empty grids, conflicting options)."""


class OracleFailure(RuntimeError):
    """A numerical cross-check could not reach its convergence target."""
