"""Exception hierarchy shared by all modules."""


class SSMError(ValueError):
    """Base class for invalid input or infeasible computations."""


class DegenerateAlphabetError(SSMError):
    pass


class ResourceError(SSMError):
    """Raised when a computation would exceed its size guard."""


class ValidityError(SSMError):
    """Raised when a parameter leaves the range where a bound is valid."""


class InfeasibleError(SSMError):
    """Raised when a root-finding problem has no sign change."""


class ModeError(SSMError):
    pass


class MapSyntaxError(SSMError):
    def __init__(self, message, pos):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class ConvexityError(SSMError):
    pass
