class NchilbError(Exception):
    """Base class for errors raised by this package."""


class DomainError(NchilbError, ValueError):
    """An argument lies outside the domain of an operation."""


class ForestParseError(DomainError):
    """Malformed forest text."""


class CapExceededError(NchilbError):
    """A computation would exceed its configured resource cap."""

    def __init__(self, what: str, required: int, cap: int):
        self.what = what
        self.required = required
        self.cap = cap
        super().__init__(
            f"{what}: requires {required}, cap is {cap} (raise the cap to proceed)"
        )


class NotInChartError(DomainError):
    """The node vectors of a forest do not form a basis at the given point."""


class UnstablePointError(DomainError):
    """The point does not lie in any cell: the image of f does not generate W."""
