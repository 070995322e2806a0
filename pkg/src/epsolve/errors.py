"""Shared exception types."""


class ShapeMismatch(ValueError):
    """Domains/codomains (or kinds) of the arguments do not line up."""


class CapExceeded(RuntimeError):
    """A construction or enumeration would exceed its configured size cap."""


class WitnessError(ValueError):
    """A chain is not increasing, or its stabilization witness is invalid."""


class NotPointed(ValueError):
    """An operation requiring a bottom element was given an unpointed poset."""


class InvalidPoset(ValueError):
    """Raised when deserializing or constructing a poset that fails an axiom."""


class InvalidPair(ValueError):
    """A (l, r) pair does not satisfy its kind's defining (in)equalities."""


class InvalidCategory(ValueError):
    """A finite O-category table violates the category or enrichment laws."""
