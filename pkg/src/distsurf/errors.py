"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class IntegrityError(RuntimeError):
    """An internal consistency guarantee failed (e.g. a set that claimed to
    be rational turns out not to be).  Signals bad upstream data, not bad
    arguments."""


class BudgetError(RuntimeError):
    """A bounded exhaustive search ran out of its configured budget before
    reaching a definitive answer."""
