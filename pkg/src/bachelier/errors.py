"""Exception types raised by the pricing routines."""


class DomainError(ValueError):
    """Input outside the domain where a formula or model is defined."""


class NoImpliedVolError(DomainError):
    """The quoted price admits no implied volatility."""

    PREFIX = "no implied volatility exists"

    def __init__(self, reason=None):
        super().__init__(f"{self.PREFIX}: {reason}" if reason else self.PREFIX)


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap."""


class LeeBoundWarning(UserWarning):
    """Converted BS volatility exceeds the model-free wing bound."""
