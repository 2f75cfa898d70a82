"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a transform is defined."""


class SingularityError(ZeroDivisionError):
    """A denominator vanishes (or nearly does) at the requested argument."""


class TruncationError(ValueError):
    """A truncated series does not carry enough terms for the request."""


class NotReachedError(RuntimeError):
    """A crossing was not observed within the simulated horizon."""


class NumericalInstabilityError(ArithmeticError):
    """Independent numerical routes disagree beyond tolerance."""
