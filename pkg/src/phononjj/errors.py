"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class SolverError(RuntimeError):
    """A numerical routine failed to converge or violated its accuracy contract."""


class ConfigError(ValueError):
    """A configuration file or parameter set is malformed."""


class RWAViolationError(ValueError):
    """Device parameters are too strong for the rotating-wave reduction."""
