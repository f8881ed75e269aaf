"""Exception types shared across the solver stack."""


class SolverError(Exception):
    """Numeric failure inside a solver pass."""


class SimplexViolation(SolverError):
    """A probability vector left the simplex by more than roundoff allows."""


class NumericOverflow(SolverError):
    """Non-finite values appeared during an ODE pass."""


class DimensionMismatch(SolverError):
    """Array shapes disagree with the game or grid they are used with."""


class ConfigError(Exception):
    """Malformed or inconsistent experiment configuration."""
