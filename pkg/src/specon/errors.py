class SpeconError(Exception):
    """Base class for library errors."""


class DescriptorError(SpeconError, ValueError):
    """A space / region / spectrum descriptor string failed to parse."""

    def __init__(self, token, message):
        self.token = token
        super().__init__(f"{message}: {token!r}")


class CoarseQuadratureError(SpeconError, ValueError):
    """The supplied quadrature is too coarse for the requested computation."""
