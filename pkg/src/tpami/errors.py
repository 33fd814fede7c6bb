"""Exception types shared across the package."""


class DegenerateChain(Exception):
    """An arm chain collapsed to the exact zero matrix (fully crossed polarizers)."""


class DegenerateNormalization(Exception):
    """A normalization denominator vanished: an arm transmits zero mean intensity."""


class InsufficientSpan(Exception):
    """The delay grid is too short or too coarse to resolve the requested oscillation."""


class ParseError(Exception):
    """A configuration document could not be parsed at all."""


class ValidationError(Exception):
    """A configuration document parsed but failed schema or range validation."""
