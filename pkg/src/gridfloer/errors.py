"""Exception types shared across the package."""


class GridFloerError(Exception):
    """Base class for all package errors."""


# -- grid construction -------------------------------------------------------

class NonPermutation(GridFloerError):
    """A marking sequence is not a permutation of 0..n-1."""


class MarkingCollision(GridFloerError):
    """A cell holds both an O and an X marking."""


class SizeTooSmall(GridFloerError):
    """Grid size below the minimum of 2."""


class InvalidSite(GridFloerError):
    """A switch site that does not exist on, or cannot be applied to, a grid."""


# -- algebra ------------------------------------------------------------------

class BadPolicy(GridFloerError):
    """Specialization policy is malformed or names invalid markings."""


class NonHomogeneousEntry(GridFloerError):
    """A matrix entry is not a single monomial."""


class NotAComplex(GridFloerError):
    """The boundary does not square to zero."""


class NotHomogeneous(GridFloerError):
    """A boundary entry violates the grading constraint."""


class NotChainMap(GridFloerError):
    """A map does not commute with the boundaries."""


class CapExceeded(GridFloerError):
    """Requested state enumeration exceeds the configured cap."""


# -- cobordism ----------------------------------------------------------------

class ChainMapViolation(GridFloerError):
    """A constructed move map failed the chain-map assertion."""


class AnchorMismatch(GridFloerError):
    """De-stabilization anchor is neither the stabilization anchor nor
    adjacent to it."""


class BadPermutation(GridFloerError):
    """Marking renumbering is not a permutation of the marking set."""


class MoveSequenceInvalid(GridFloerError):
    """A movie move's precondition fails against the running state."""


class SitesNotDisjoint(GridFloerError):
    """Two switch sites share a row or a column."""


# -- cli ----------------------------------------------------------------------

class ParseError(GridFloerError):
    """Malformed grid or movie file; message carries a line number."""


class UnknownSuite(GridFloerError):
    """verify was asked for a suite that does not exist."""
