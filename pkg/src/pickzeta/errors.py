"""Exception hierarchy shared by all pickzeta modules."""


class PickZetaError(Exception):
    """Base class for all library errors."""


class DomainError(PickZetaError):
    """An argument lies outside the mathematical domain of an operation."""


class AccuracyError(PickZetaError):
    """The configured term budget cannot deliver the requested accuracy."""


class TruncationError(PickZetaError):
    """A finite truncation is too short for the requested tolerance."""

    def __init__(self, message, suggested_trunc=None):
        super().__init__(message)
        self.suggested_trunc = suggested_trunc


class IllConditionedError(PickZetaError):
    """Input data is too close to degenerate for a reliable answer."""


class HypothesisError(PickZetaError):
    """A mathematical precondition of an operation is violated."""


class ValidationError(PickZetaError):
    """Malformed input: schema violations, inconsistent shapes, bad flags."""
