"""Exception types raised across the package."""


class QcorrError(Exception):
    """Base class for all package-specific errors."""


class LabelCollision(QcorrError):
    """Two subsystems with the same label would end up in one layout."""


class UnknownLabel(QcorrError):
    """A referenced subsystem label does not exist in the layout."""


class DimensionError(QcorrError):
    """Operator and subsystem dimensions are incompatible."""


class DomainError(QcorrError):
    """Scalar argument outside the mathematically valid domain."""


class InvalidState(QcorrError):
    """A state object violates its defining invariants."""


class RouteUnavailable(QcorrError):
    """The requested closed-form computation route does not apply."""


class OutcomeBudgetError(QcorrError):
    """Measurement outcome count outside [dim, dim**2]."""


class EnsembleBudgetError(QcorrError):
    """Ensemble size outside [rank, rank**2]."""


class SplitBudgetError(QcorrError):
    """Ancilla split too small to purify the given state."""


class StateFormatError(QcorrError):
    """A state file could not be parsed into a valid state."""
