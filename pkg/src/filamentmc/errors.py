"""Exception types shared across the package."""


class FilamentError(Exception):
    """Base class for all package errors."""


class DomainError(FilamentError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class SingularConfigurationError(FilamentError):
    """A configuration puts two points closer than the log-interaction guard."""


class UnreachableEnthalpyError(DomainError):
    """Requested enthalpy per filament is at or above its supremum.

    The supremum over all inverse temperatures is (1 + log(4 p')) / 4; the
    offending request and the supremum are carried on the instance.
    """

    def __init__(self, requested: float, supremum: float):
        self.requested = requested
        self.supremum = supremum
        super().__init__(
            f"enthalpy per filament {requested!r} is unreachable: "
            f"supremum over all inverse temperatures is {supremum!r}"
        )


class ConvergenceError(FilamentError):
    """An iterative solver failed to bracket or converge."""


class ScanRangeError(FilamentError):
    """A brute-force scan hit its boundary; the optimum lies outside the scanned range."""


class CheckpointError(FilamentError):
    """A checkpoint document is unreadable or incompatible."""


class UsageError(FilamentError):
    """A run configuration violates a documented constraint."""
