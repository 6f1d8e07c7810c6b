"""Exception hierarchy shared by all wittkit modules."""

from __future__ import annotations


class WittError(Exception):
    """Base class for all domain errors raised by wittkit."""


class DivisionByZero(WittError):
    pass


class ZeroScalar(WittError):
    pass


class InfiniteSquareClassGroup(WittError):
    pass


class InvalidField(WittError):
    pass


class DimensionMismatch(WittError):
    pass


class FieldMismatch(WittError):
    pass


class DegenerateForm(WittError):
    pass


class PreconditionViolated(WittError):
    pass


class IsotropicReflectionVector(WittError):
    pass


class NotIsotropic(WittError):
    pass


class NotIsotropicVector(WittError):
    pass


class UnsupportedFieldForVectorSearch(WittError):
    pass


class SearchBudgetExceeded(WittError):
    """Height-bounded vector search ran out of budget.

    Distinct from NotIsotropic: the form may well be isotropic, but no
    witness was found within the configured height bound.
    """

    def __init__(self, bound, partial_trace=None):
        self.bound = bound
        self.partial_trace = tuple(partial_trace or ())
        super().__init__(f"no isotropic vector of height <= {bound} found")


class InfiniteRing(WittError):
    pass


class NotInIdealPower(WittError):
    pass


class UnsupportedField(WittError):
    pass


class ParseError(WittError):
    """Syntax error in a form expression; carries the 0-based offset."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class ZeroEntry(ZeroScalar):
    """A parsed expression contains a zero in a slot that forbids it."""
