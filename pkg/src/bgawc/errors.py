"""Exception types shared across the package."""


class BgawcError(Exception):
    """Base class for all package errors."""


class GuardExceeded(BgawcError):
    """A configured size guard (group order, poset size, chain count, field size) was hit."""


class AmbientMismatch(BgawcError):
    """Arguments live in different ambient groups."""


class NotNormal(BgawcError):
    """Quotient requested by a non-normal subgroup."""


class FieldMismatch(BgawcError):
    """Field elements from different fields were combined."""


class NotSplit(BgawcError):
    """An idempotent did not split into one-dimensional components over the given field."""


class OracleMismatch(BgawcError):
    """An independent oracle disagreed with the primary computation."""


class NotIdempotent(BgawcError):
    """An element expected to be idempotent is not (signals an upstream bug)."""


class TNotStabilizing(BgawcError):
    """The chosen Galois subgroup does not fix the idempotent."""


class ChopBudgetExceeded(BgawcError):
    """The randomized splitting loop ran out of trials; rerun with a fresh seed."""


class ProfileMismatch(BgawcError):
    """Fixed-point profiles are indexed by different divisor sets."""


class ParseError(BgawcError):
    """Malformed group source (builtin name or group file)."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column
