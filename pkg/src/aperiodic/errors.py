"""Exception types shared across the package."""


class AperiodicError(Exception):
    """Base class for all package errors."""


class MalformedPatch(AperiodicError):
    """Patch violates a structural precondition (illegal configuration)."""


class OutOfPatch(AperiodicError):
    """A tracked point left the patch before the requested depth."""


class OnBoundary(AperiodicError):
    """A tracked point landed on a tile boundary; result is ambiguous."""


class OutOfRhomb(AperiodicError):
    """A Q point violates the thin-rhomb chart bounds."""


class DegenerateTile(AperiodicError):
    """A constructed tile has zero area."""


class DomainError(AperiodicError):
    """Input outside the mathematical domain of a map."""
