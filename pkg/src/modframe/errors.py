"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """An argument violates an operation's precondition."""


class UnsupportedExponent(InvalidArgument):
    """The exponent lies outside the range an operation supports."""


class ResourceLimit(ValueError):
    """The requested size exceeds the enumeration budget of an operation."""
