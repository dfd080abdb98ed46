"""Exception taxonomy shared across the toolkit."""


class AimLakeError(Exception):
    """Base class for all toolkit errors."""


class NonPositiveDepth(AimLakeError):
    """Bottom topography b must satisfy inf b > 0."""


class NonPositiveViscosity(AimLakeError):
    """Viscosity field must satisfy inf nu > 0."""


class GridMismatch(AimLakeError):
    """Operands live on different grids."""


class SingularGram(AimLakeError):
    """Gram matrix too ill-conditioned; grid too coarse for the chosen b."""


class IndexOutOfRange(AimLakeError):
    """Projection cut outside [0, D]."""


class NegativeTime(AimLakeError):
    """Semigroup only defined for t >= 0."""


class SingularOperator(AimLakeError):
    """Operator inverse requested with a nonpositive eigenvalue present."""


class BlowUp(AimLakeError):
    """Trajectory norm exceeded the guard threshold (mis-set dt?)."""


class BackwardBlowUp(AimLakeError):
    """Backward Euler iterate exceeded the guard threshold."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class BudgetExceeded(AimLakeError):
    """Recursive manifold evaluation count passed the configured cap."""


class NoAbsorption(AimLakeError):
    """Ensemble norms failed to stop growing within the horizon."""


class UnsupportedMollifier(AimLakeError):
    """Mollifier outside the supported family."""


class NoConvergence(AimLakeError):
    """Fixed-point iteration diverged."""

    def __init__(self, message, at=None):
        super().__init__(message)
        self.at = at


class IllConditioned(AimLakeError):
    """Dense oracle matrix inversion unstable."""


class ConfigError(AimLakeError):
    """Scenario file invalid; message names the offending key."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class StageFailure(AimLakeError):
    """A pipeline stage failed; carries the originating context."""

    def __init__(self, stage, message):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage
