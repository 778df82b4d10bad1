"""Exception hierarchy shared by every module.

The CLI maps the four top-level families (``ParseError``, ``ValidationError``,
``CheckFailure``, ``BudgetExceeded``) onto distinct exit codes.
"""

from __future__ import annotations


class DorbitsError(Exception):
    """Base class for all library errors."""


class ParseError(DorbitsError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ValidationError(DorbitsError, ValueError):
    """Input data does not describe a valid structure."""


# -- categories ---------------------------------------------------------------

class MissingIdentity(ValidationError):
    pass


class NonAssociative(ValidationError):
    pass


class IncompleteCompositionTable(ValidationError):
    pass


class DanglingEndpoint(ValidationError):
    pass


class UnknownObject(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class MismatchedSignature(ValidationError):
    pass


class NotFunctorial(ValidationError):
    pass


class NotNatural(ValidationError):
    pass


# -- spaces -------------------------------------------------------------------

class NotAPreorder(ValidationError):
    pass


class NonMonotone(ValidationError):
    pass


class NonMonotoneAction(NonMonotone):
    pass


class OutOfRange(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class UnknownPoint(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# -- orbits, cells ------------------------------------------------------------

class NotAnOrbit(ValidationError):
    pass


class NotDiscrete(ValidationError):
    pass


class MissingFreeOrbit(ValidationError):
    def __init__(self, obj):
        self.obj = obj
        super().__init__(f"family has no free orbit for object {obj!r} (must equal the representable on the nose)")


class SourceMismatch(ValidationError):
    def __init__(self, message, stage=None):
        self.stage = stage
        if stage is not None:
            message = f"stage {stage}: {message}"
        super().__init__(message)


class UnknownEntity(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# -- checks and budgets -------------------------------------------------------

class CheckFailure(DorbitsError):
    pass


class BudgetExceeded(DorbitsError):
    pass


class SearchBudgetExceeded(BudgetExceeded):
    pass


class BoundsTooLarge(BudgetExceeded):
    pass
