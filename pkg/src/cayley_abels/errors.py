"""Exception hierarchy.

The CLI maps these onto exit codes: validation and hypothesis failures exit
with 1, inconclusive bounded computations with 2, malformed input with 3.
"""


class CayleyAbelsError(Exception):
    """Base class for all library errors."""


class ValidationError(CayleyAbelsError, ValueError):
    """Input violates a structural requirement (loop, non-subgroup, ...)."""


class HypothesisUnmet(CayleyAbelsError):
    """A theorem's hypothesis does not hold, so no answer is returned."""


class Inconclusive(CayleyAbelsError):
    """A bounded computation ran out of depth/radius before deciding."""


class DepthExceeded(Inconclusive):
    """Raised when a truncation is too shallow for the requested quantity.

    ``checked`` carries the largest parameter value that could be handled.
    """

    def __init__(self, message, checked=None):
        super().__init__(message)
        self.checked = checked


class SpecError(CayleyAbelsError, ValueError):
    """Malformed model/spec input."""
