"""Exception and warning classes shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation (malformed input)."""


class InapplicableError(ValueError):
    """A formula cannot be evaluated for these parameters (e.g. a zero denominator)."""


class BudgetError(ValueError):
    """A construction would exceed a configured size budget."""


class ProvenanceWarning(UserWarning):
    """An exponent formula is used outside the range where it was stated."""
