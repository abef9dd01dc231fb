"""Exception types shared across the package."""


class EventStructError(Exception):
    """Base class for all package errors."""


class ValidationError(EventStructError):
    """A structure violates its defining axioms (bad input)."""


class UnknownEventError(ValidationError):
    """An operation referenced an event id the structure does not contain."""


class ParseError(EventStructError):
    """Syntax or validation error in a source document, with location."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class PreconditionError(EventStructError):
    """An analysis precondition does not hold; carries a witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAConfigurationError(PreconditionError):
    pass


class NotRStoppedError(PreconditionError):
    pass


class NotGenerableError(PreconditionError):
    """Consistency is not generated by a binary conflict relation."""


class UnsafeNetError(EventStructError):
    """A net reached a marking that violates 1-safety."""

    def __init__(self, message: str, firing_sequence: tuple[str, ...]):
        super().__init__(message)
        self.firing_sequence = firing_sequence


class TruncatedStructureError(EventStructError):
    """Probabilistic analysis refused a truncated unfolding prefix."""
