"""Shared error types."""


class BudgetExceededError(RuntimeError):
    """An enumeration or search exceeded its declared budget.

    Raised loudly instead of silently approximating; carries whatever
    partial knowledge the caller can still use.
    """

    def __init__(self, message: str, lower_bound: int | None = None):
        super().__init__(message)
        self.lower_bound = lower_bound
