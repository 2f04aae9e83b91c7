"""Exception types shared across the package."""


class CapExceeded(RuntimeError):
    """A requested construction exceeds a configured size cap."""


class VerificationError(RuntimeError):
    """A certificate or factorization failed its numerical check."""
