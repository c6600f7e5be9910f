"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class StructuralError(ValueError):
    """Layer dimensions do not chain."""


class ConstructionError(RuntimeError):
    """The folding construction produced a degenerate object."""


class RegionBudgetExceeded(RuntimeError):
    """Region enumeration produced more regions than the configured budget."""
