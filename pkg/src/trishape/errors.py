"""Exception types shared across the package."""


class DomainError(ValueError):
    """A value is outside its geometric domain (distinct from a malformed argument)."""


class NotATriangleError(DomainError):
    """Squared side lengths violate the triangle inequality."""
