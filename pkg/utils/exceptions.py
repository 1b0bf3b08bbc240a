"""Custom exceptions."""


class ModlieError(Exception):
    """Base exception for engine errors."""

    pass


class PreconditionError(ModlieError):
    """Exception raised when an operation is called outside its domain."""

    pass


class InvariantViolation(ModlieError):
    """Exception raised when a computed result fails its own postcondition."""

    pass


# Fields


class DivisionByZero(ModlieError):
    """Exception raised when inverting zero."""

    pass


class SpecMismatch(ModlieError):
    """Exception raised when operands live over different fields."""

    pass


class FieldTooLargeForEnumeration(ModlieError):
    """Exception raised when a field exceeds the enumeration bound."""

    pass


class FieldTooSmall(ModlieError):
    """Exception raised when a search needs a larger field extension."""

    pass


# Linear algebra


class DimensionMismatch(ModlieError):
    """Exception raised when vector or matrix shapes disagree."""

    pass


class NotDiagonalizable(ModlieError):
    """Exception raised when a torus does not act diagonally over the working field."""

    pass


class EigenvalueCrossCheckUnavailable(ModlieError):
    """Exception raised when eigenvalues are not all in the working field."""

    pass


# Constructions


class UnsupportedType(ModlieError):
    """Exception raised for root system types that are not built."""

    pass


class DimensionCapExceeded(ModlieError):
    """Exception raised when an algebra would exceed the dimension cap."""

    pass


class NilpotencyIndexTooLarge(ModlieError):
    """Exception raised when a root vector is not ad-nilpotent of index at most p."""

    pass


# Restricted structure


class NotInAdImage(ModlieError):
    """Exception raised when (ad y)^p is not an inner derivation."""

    pass


class ElementBelowFiltrationZero(ModlieError):
    """Exception raised when an element lies outside filtration degree zero."""

    def __init__(self, message: str, comparison: object = None) -> None:
        """Keep the comparison that was computed before the check failed."""
        super().__init__(message)
        self.comparison = comparison


# Searches


class SearchBudgetExhausted(ModlieError):
    """Exception raised when a randomized search runs out of draws."""

    pass


class NoPartnerInField(ModlieError):
    """Exception raised when no generating partner exists in the scanned field."""

    pass


class NoAlphaInSearchedExtensions(ModlieError):
    """Exception raised when every searched extension fails the determinant test."""

    pass


class RecipeStepFailed(ModlieError):
    """Exception raised when a step of the graded pair recipe fails."""

    def __init__(self, step: str, message: str) -> None:
        """Record the failing step id."""
        super().__init__(f"{step}: {message}")
        self.step = step


class BudgetExceeded(ModlieError):
    """Exception raised when an exhaustive plan exceeds its budget."""

    pass


# Command line


class ParseError(ModlieError):
    """Exception raised when an algebra descriptor cannot be parsed."""

    pass


class ValidationFailure(ModlieError):
    """Exception raised when an algebra fails validation."""

    pass
