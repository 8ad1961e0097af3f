"""Exception types raised by the simulator."""


class CakeError(Exception):
    """Base class for simulator errors."""


class DomainError(CakeError, ValueError):
    """A point or interval lies outside the unit cake."""


class DegenerateIntervalError(DomainError):
    """A query needs an interval of positive value but got an empty one."""


class ValuationError(CakeError, ValueError):
    """A valuation specification is malformed."""


class ProtocolViolation(CakeError):
    """A strategy broke the game protocol (bad cut or bad choice)."""


class ModeError(CakeError):
    """A strategy was used in a game mode it does not support."""


class NumericalError(CakeError, ArithmeticError):
    """An iterative numerical routine failed to converge."""


class ResourceError(CakeError):
    """A requested computation exceeds the configured size cap."""


class ConfigError(CakeError, ValueError):
    """A run or sweep configuration is invalid."""
