"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain of the operation (bad index,
    dimension mismatch, unsupported modulus, singular block, ...)."""


class ArityError(DomainError):
    """A polyadic product received a factor count that is not l*(n-1)+1."""


class ValidationError(DomainError):
    """A structural invariant of a value is violated (norm, coefficient
    product, inconsistent parameters)."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed the configured product budget.

    Raised instead of silently switching to sampling, so that an
    "exhaustively verified" claim is always literally true.
    """
