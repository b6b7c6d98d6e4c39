"""Exception hierarchy shared by every layer of the toolkit."""


class WbwcError(Exception):
    """Base class for all errors raised by wbwc."""


class EmptyText(WbwcError, ValueError):
    """An operation that needs at least one symbol received an empty text."""


class InvalidParameter(WbwcError, ValueError):
    pass


class ConfigError(WbwcError, ValueError):
    """Inconsistent codec configuration or unreadable benchmark manifest."""


class CorruptBlock(WbwcError):
    """A transformed block or payload failed a structural check."""


class CorruptHeader(WbwcError):
    pass


class TruncatedStream(CorruptBlock):
    """The decoder ran past the end of the payload."""


class MissingHeader(WbwcError, ValueError):
    """static and f_adp models need a frequency table."""


class HeaderMismatch(CorruptBlock):
    """The decoded symbols disagree with the transmitted frequency table."""


class ZeroProbabilitySymbol(CorruptBlock):
    """A symbol with zero weight was requested from a model."""


class InternalInvariantViolation(WbwcError, AssertionError):
    """A model handed the coder an interval that breaks its preconditions."""


class InvarianceViolation(WbwcError, AssertionError):
    """A permutation changed the coded size of a permutation-invariant method.

    The offending permutation is kept on ``permutation`` so it can be replayed.
    """

    def __init__(self, message, permutation=None):
        super().__init__(message)
        self.permutation = permutation
