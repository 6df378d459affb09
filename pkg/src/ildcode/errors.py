"""Exception types shared across the package."""


class IldError(Exception):
    """Base class for all package errors."""


class DomainError(IldError):
    """An argument is outside the mathematical domain of the operation."""


class DimensionMismatch(IldError):
    """Two objects that must share an alphabet or length do not."""


class SupportViolation(IldError):
    """Positive mass placed on a letter the reference pmf gives zero mass."""


class RangeError(IldError):
    """An index, seed, or parameter is outside its admissible range."""


class SizeLimit(IldError):
    """An operation would materialize more strings than the explicit cap."""


class NotInCodebook(IldError):
    """A string is not a member of the codebook."""


class EmptyTypicalSet(IldError):
    """No type satisfies the typicality condition at this (n, eps)."""


class EmptySet(IldError):
    """A partition set is empty where a nonempty one is required."""


class BudgetTooSmall(IldError):
    """The seed budget 2^B cannot cover a partition set."""


class BracketOverflow(IldError):
    """A divergence bound's bracket reached or exceeded 1, so the bound is vacuous."""


class FactorizationMismatch(IldError):
    """A target pmf does not factor into the given component targets."""
