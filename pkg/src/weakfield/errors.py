"""Exception types shared across the package.

Plain ``ValueError`` is used for scalar domain violations (negative energies,
out-of-range indices); the classes below mark errors that the CLI maps to
distinct exit codes.
"""


class ConfigurationError(ValueError):
    """Invalid run configuration: bad experiment name, arity mismatch, bad grid."""


class NumericError(RuntimeError):
    """A numeric evaluation produced a non-finite value.

    Carries the coordinates of the offending probe so sweeps can abort with
    a useful message.
    """

    def __init__(self, message, where=None):
        super().__init__(message if where is None else f"{message} at {where}")
        self.where = where


class BracketError(ValueError):
    """Root bracketing failed: no sign change on the given interval."""


class SchemaError(ValueError):
    """A CSV artifact is missing required columns or is empty."""
