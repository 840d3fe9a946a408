"""Exception hierarchy shared by every module."""


class KSubCoverError(Exception):
    """Base class for package errors."""


class ConfigError(KSubCoverError, ValueError):
    """Bad arity, parameter range, or missing algorithm input."""


class PreconditionError(KSubCoverError, ValueError):
    """An operation was called outside its precondition."""


class InstanceError(KSubCoverError, ValueError):
    """Instance data is inconsistent (weights, duplicate stream elements, ...)."""


class BudgetExceededError(KSubCoverError):
    """Exhaustive enumeration would exceed the configured budget."""


class InfeasibleError(KSubCoverError):
    """No candidate solution reaches the utility bar."""

    def __init__(self, message: str, candidates: int = 0):
        super().__init__(message)
        self.candidates = candidates


class GenerationError(KSubCoverError):
    """Rejection sampling ran out of attempts."""


class ParseError(KSubCoverError, ValueError):
    """Malformed instance file; carries a location string."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
