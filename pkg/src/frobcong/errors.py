"""Exception types shared across the package."""


class UsageError(ValueError):
    """A request violates a documented precondition (bad colors, residue, modulus...)."""
