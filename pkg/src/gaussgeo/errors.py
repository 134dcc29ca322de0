"""Exception hierarchy.

Both concrete errors derive from :class:`ValueError` so callers that do not
care about the distinction can catch the builtin.
"""


class GaussGeoError(Exception):
    """Base class for all package errors."""


class ValidationError(GaussGeoError, ValueError):
    """Malformed input: wrong shape, non-symmetric matrix, out-of-domain scalar."""


class PreconditionError(GaussGeoError, ValueError):
    """Well-formed input that violates a mathematical precondition.

    Examples are a non-completely-positive channel handed to the
    Choi-Jamiolkowski map, or a pure reference marginal.
    """
