"""Exception taxonomy shared across the package.

Validation failures are ValueError subclasses so plain ``except ValueError``
keeps working; resource and numerical failures are RuntimeErrors that the
CLI maps to distinct exit codes.
"""


class MartonkitError(Exception):
    """Base class for every error raised deliberately by this package."""


class InvalidDistributionError(MartonkitError, ValueError):
    """A probability vector or joint table failed validation."""


class InvalidChannelError(MartonkitError, ValueError):
    """A broadcast channel description failed validation.

    Carries the full list of violations in ``violations``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ResourceLimitError(MartonkitError, RuntimeError):
    """An enumeration or table size exceeded its configured cap."""


class NumericalError(MartonkitError, RuntimeError):
    """An iterative routine failed to reach its tolerance.

    ``residual`` holds the most relevant residual magnitude when available.
    """

    def __init__(self, message, residual=None, diagnostics=None):
        super().__init__(message)
        self.residual = residual
        self.diagnostics = diagnostics or {}
