"""Exception hierarchy shared by every module."""


class MagicGroupsError(Exception):
    pass


class CarrierMismatchError(MagicGroupsError, TypeError):
    """An element was handed to a group it does not belong to."""


class GroupValidationError(MagicGroupsError, ValueError):
    """A Cayley table or semidirect action does not define a group.

    ``witness`` holds the offending indices (a row/column pair, or an
    (i, j, k) triple for associativity failures) when one exists.
    """

    def __init__(self, message, witness=None, row=None, col=None):
        super().__init__(message)
        self.witness = witness
        self.row = row
        self.col = col


class EmbeddingError(MagicGroupsError, ValueError):
    pass


class NotAHomomorphismError(EmbeddingError):
    pass


class NotInjectiveError(EmbeddingError):
    pass


class UnsupportedOperationError(MagicGroupsError):
    """The operation needs a property (commutativity, finiteness, a free
    factor) that the group does not have."""


class PreconditionError(MagicGroupsError, ValueError):
    pass


class DomainError(MagicGroupsError, ValueError):
    pass


class ParseError(MagicGroupsError, ValueError):
    """Syntax error in a group expression, element string or input file."""

    def __init__(self, message, offset=None, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = message
        if offset is not None:
            detail += f' at offset {offset}'
        if self.expected:
            detail += f' (expected one of: {", ".join(self.expected)})'
        super().__init__(detail)
        self.message = message


class SpecError(ParseError):
    """Well-formed syntax with an invalid meaning, e.g. ``C1``."""
