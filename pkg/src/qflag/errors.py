"""Exception types shared across the package."""


class QflagError(Exception):
    """Base class for all package errors."""


class ScalarMixError(QflagError):
    """Two scalars over incompatible coefficient fields were combined."""


class ScalarDivisionError(QflagError, ZeroDivisionError):
    """Division or inversion by the zero scalar."""


class ParseError(QflagError, ValueError):
    """A string did not match the expected grammar."""


class DominanceError(QflagError, ValueError):
    """A weight was required to be dominant and is not."""


class DegreeCapError(QflagError):
    """A computation exceeded the configured height cap."""


class TruncationError(QflagError):
    """An operation left the exact truncation window of a module."""


class SideMismatchError(QflagError, ValueError):
    """Left/right module sides are incompatible."""


class BorelError(QflagError, ValueError):
    """An element was required to lie in a Borel part and does not."""


class OreSearchError(QflagError):
    """No Ore witness was found within the configured grade bound."""
