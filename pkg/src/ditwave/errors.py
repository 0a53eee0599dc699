"""Exception hierarchy shared by all ditwave modules."""


class DitwaveError(Exception):
    """Base class for every error raised by the package."""


class DomainError(DitwaveError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(DitwaveError, ValueError):
    """An object or combination of objects violates a structural invariant."""


class ResolutionError(ValidationError):
    """A grid is too coarse for the feature it is asked to represent."""


class ConfigurationError(DitwaveError, ValueError):
    """Solver settings that cannot produce a trustworthy run."""


class AccuracyError(DitwaveError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual estimate {residual:.3e})")
        self.residual = residual


class NumericalFailure(DitwaveError, ArithmeticError):
    """A run produced a result that violates a conservation check."""


class ExpansionOverflow(NumericalFailure):
    """Non-finite value while summing a replication expansion."""

    def __init__(self, term_index):
        super().__init__(f"non-finite accumulation at term {term_index}")
        self.term_index = term_index
