"""Exception hierarchy shared by all fuzzycover modules."""


class FuzzyCoverError(Exception):
    """Base class for every error raised by this package."""


class UniverseMismatch(FuzzyCoverError):
    """Two values built over different universes were combined."""


class RangeError(FuzzyCoverError):
    """A membership degree lies outside [0, 1]."""


class EmptyFamily(FuzzyCoverError):
    """A covering was built from an empty list of fuzzy sets."""


class EmptyMember(FuzzyCoverError):
    """A covering member is identically zero."""


class NotACovering(FuzzyCoverError):
    """No member reaches membership 1 at some element.

    The offending element label is stored in ``element``.
    """

    def __init__(self, element: str):
        self.element = element
        super().__init__(f"no member reaches 1 at element {element!r}")


class UnknownAggregator(FuzzyCoverError):
    """Requested aggregator name is not in the builtin catalogue."""


class NonMonotoneAggregator(FuzzyCoverError):
    """Residuation requires an aggregator that is increasing in each slot."""


class UnknownModelGroup(FuzzyCoverError):
    """Model group label is not one of the catalogued classes."""


class MissingO7(FuzzyCoverError):
    """Neighborhood-derived coverings need 1-section deflation (O7)."""


class CoveringTooLarge(FuzzyCoverError):
    """Irreducible-member reduction is capped to keep runtime bounded."""


class ZeroUpperCardinality(FuzzyCoverError):
    """Approximation precision is undefined when the upper set is empty."""


class DegenerateIdeal(FuzzyCoverError):
    """Closeness is undefined when some alternative coincides with an ideal."""


class LengthMismatch(FuzzyCoverError):
    """Two rankings cover different alternative sets."""


class ParseError(FuzzyCoverError):
    """Malformed cell in an input file; carries 1-based line and column."""

    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")
