"""Exception types shared across the package."""


class PrimeGapsError(Exception):
    """Base class for all package-specific errors."""


class CoverageError(PrimeGapsError):
    """A query needs primes beyond the range a table was built for."""


class MemoryCapError(PrimeGapsError):
    """Estimated working-set size exceeds the configured cap."""

    def __init__(self, required_bytes: int, cap_bytes: int):
        self.required_bytes = int(required_bytes)
        self.cap_bytes = int(cap_bytes)
        super().__init__(
            f"estimated working set {self.required_bytes} bytes exceeds "
            f"memory cap {self.cap_bytes} bytes"
        )


class IncompleteResultError(PrimeGapsError):
    """A sequence was requested past the point where its terms can be certified.

    ``certified`` is the number of leading terms that would have been safe
    to return at the horizon actually scanned.
    """

    def __init__(self, certified: int, requested: int, horizon: int, kind: str):
        self.certified = int(certified)
        self.requested = int(requested)
        self.horizon = int(horizon)
        self.kind = kind
        super().__init__(
            f"scan horizon {self.horizon} certifies only {self.certified} of "
            f"{self.requested} requested {kind} terms; rebuild with a larger table"
        )


class ChainStallError(PrimeGapsError):
    """A chain step produced no new term (no prime strictly between b and m*b)."""


class VerificationFailure(PrimeGapsError):
    """A structural check that is expected to hold was violated."""
