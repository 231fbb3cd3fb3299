"""Exception types shared by all modules."""


class DistSpecError(Exception):
    """Base class for every error raised by distspec."""


class ParseError(DistSpecError, ValueError):
    """Malformed graph text. ``line`` is 1-based, ``position`` a 0-based byte offset."""

    def __init__(self, message, line=None, position=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"byte {position}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.position = position


class ContractError(DistSpecError, ValueError):
    """An operation was called outside the hypotheses it relies on."""


class DomainError(ContractError):
    """A numeric argument lies outside the function's domain (e.g. lambda <= 2)."""


class DisconnectedGraphError(ContractError):
    """The operation needs a connected graph."""


class CapExceededError(ContractError):
    """An exhaustive search would examine more candidates than allowed."""

    def __init__(self, message, required, cap):
        super().__init__(message)
        self.required = required
        self.cap = cap


class ConvergenceError(DistSpecError, RuntimeError):
    """Iteration cap reached; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class WalkOverflowError(DistSpecError, OverflowError):
    """A walk count exceeded the declared integer width."""

    def __init__(self, message, k):
        super().__init__(message)
        self.k = k
