"""Exception hierarchy shared by all dtcode modules."""


class DtcError(Exception):
    """Base class for every error raised by dtcode."""


class InvariantViolation(DtcError, ValueError):
    """A value failed validation; ``field`` names the offending field path."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ParseError(DtcError, ValueError):
    """A config or codebook file could not be parsed."""


class CapExceeded(DtcError):
    """Full enumeration would exceed the configured size cap."""


class BudgetExceeded(DtcError):
    """A search would exceed its evaluation budget."""


class LengthMismatch(DtcError, ValueError):
    """Two sequences that must have equal length do not."""


class ZeroDistanceAnchors(DtcError, ValueError):
    """Binary partition anchors have zero distance."""


class SymbolNotInPartition(DtcError, KeyError):
    """A codeword symbol does not belong to any partition class."""


class UnlabeledEdge(DtcError, KeyError):
    """An edge labeling is missing a graph edge."""


class DomainError(DtcError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class UnsupportedCombiner(DtcError, ValueError):
    """The operation is only defined for the additive channel model."""
